#include <cstdio>

#include "cseu/experiments.hpp"
#include "cseu/stats.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cseu;

TEST_CASE("ks test null and mismatch cases") {
  CounterRng rng(81);
  int null_pass = 0;
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<double> samples(10000);
    for (auto& x : samples) x = rng.uniform();
    if (ks_test(samples, [](double x) { return x; }).p_value > 0.01) ++null_pass;
  }
  CHECK(null_pass >= 39);  // "p > 0.01 in >= 99% of seeded repeats" at pinned seed

  std::vector<double> uniform(10000);
  for (auto& x : uniform) x = rng.uniform();
  const auto mismatch = ks_test(uniform, [](double x) { return x * x; });
  CHECK(mismatch.p_value < 1e-6);

  std::vector<double> beta(10000);
  for (auto& x : beta) x = rng.beta(2.0, 1.0);
  CHECK(ks_test(beta, [](double x) { return beta_cdf_int(2, 1, x); }).p_value > 0.01);

  CHECK_THROWS(ks_test(std::vector<double>(10, 0.5), [](double x) { return x; }));
}

TEST_CASE("config parsing and validation") {
  const std::string text = R"({
    "n": 2, "s": 2, "m": 64, "batches": 3, "mode": "continuous-haar",
    "seed": 99, "threads": 2, "repeats": 10, "epsilon": 0.25, "delta": 0.1,
    "unitary": {"kind": "pauli", "label": "XZ"},
    "tasks": [
      {"style": "gue", "budget": 2.0, "state": {"kind": "induced", "lambda": 2}},
      {"style": "scaled-identity", "budget": 4.0, "state": {"kind": "pure"}}
    ]
  })";
  const ExperimentConfig cfg = parse_config_json(text);
  CHECK(cfg.dim() == 4);
  CHECK(cfg.s == 2);
  CHECK(cfg.tasks.size() == 2);
  CHECK(cfg.tasks[0].lambda == 2);
  CHECK(cfg.unitary.label == "XZ");

  CHECK_THROWS(parse_config_json("not json"));
  CHECK_THROWS(parse_config_json(R"({"n": 9})"));                      // d > 16
  CHECK_THROWS(parse_config_json(R"({"n": 1, "m": 4, "batches": 3})"));  // m < 2R
  CHECK_THROWS(parse_config_json(R"({"n": 1, "mode": "rgcm", "s": 2, "m": 10})"));

  const UnitaryOp u = make_unitary(cfg.unitary, 4);
  CHECK(max_abs(CMat(u.matrix() - pauli_string("XZ"))) == 0.0);

  CounterRng rng(82);
  const auto tasks = make_tasks(cfg.tasks, 4, rng);
  CHECK(tasks.size() == 2);
  CHECK(tasks[1].purity == doctest::Approx(1.0));
}

TEST_CASE("csv output is stable and quoted") {
  CsvWriter csv({"a", "b"});
  csv.add_row({"1", "plain"});
  csv.add_row({"2", "needs,\"quote\""});
  const std::string text = csv.str();
  CHECK(text == "schema_version,a,b\r\n" + std::string(kCsvSchemaVersion) +
                    ",1,plain\r\n" + std::string(kCsvSchemaVersion) +
                    ",2,\"needs,\"\"quote\"\"\"\r\n");
  CHECK_THROWS(csv.add_row({"only-one"}));
}

TEST_CASE("calibration file round trip") {
  Calibration cal = default_calibration();
  cal.batch_var_c = 3.25;
  const std::string path = "calibration_test.txt";
  save_calibration(cal, path);
  const Calibration back = load_calibration(path);
  std::remove(path.c_str());
  CHECK(back.batch_var_c == doctest::Approx(3.25));
  CHECK(back.version == cal.version);
  CHECK_THROWS(load_calibration("missing_file.txt"));
}

TEST_CASE("failure rate experiment obeys the chernoff bound") {
  ExperimentConfig cfg;
  cfg.qubits = 1;
  cfg.s = 1;
  cfg.batches = 11;
  cfg.m = 11 * 40;
  cfg.seed = 4242;
  cfg.repeats = 200;
  cfg.epsilon = 3.5;  // far outside the batch spread: failures impossible
  cfg.unitary.kind = "haar";
  cfg.unitary.seed = 3;
  TaskSpec task;
  task.style = ObservableStyle::Gue;
  task.budget = 1.0;
  cfg.tasks = {task};

  // Large epsilon: failures are impossible in practice.
  const StatReport trivial = failure_rate_experiment(cfg);
  CHECK(trivial.sample_mean == 0.0);

  // Moderate epsilon: per-batch failures happen but stay under 1/4, and
  // the median keeps the joint failure within the Chernoff envelope.
  cfg.epsilon = 2.0;
  const StatReport rep = failure_rate_experiment(cfg);
  CHECK(rep.pass());
}

TEST_CASE("scan variance decreases with s at fixed q") {
  ExperimentConfig cfg;
  cfg.qubits = 2;
  cfg.seed = 21;
  cfg.scan.dims = {4};
  cfg.scan.copies = {1, 2, 4};
  cfg.scan.batch_sizes = {16};
  cfg.scan.budgets = {1.0};
  cfg.scan.lambdas = {1};
  cfg.scan.shadows = 250;
  const std::string text = run_scan(cfg).str();
  // pull the empirical_var column (index 7 counting schema_version) rows
  std::vector<double> vars;
  std::size_t pos = text.find("\r\n") + 2;
  while (pos < text.size()) {
    std::size_t end = text.find("\r\n", pos);
    if (end == std::string::npos) break;
    std::string row = text.substr(pos, end - pos);
    std::vector<std::string> cells;
    std::size_t c0 = 0;
    while (true) {
      std::size_t comma = row.find(',', c0);
      cells.push_back(row.substr(c0, comma - c0));
      if (comma == std::string::npos) break;
      c0 = comma + 1;
    }
    vars.push_back(std::stod(cells[7]));
    pos = end + 2;
  }
  REQUIRE(vars.size() == 3);
  CHECK(vars[1] < vars[0]);
  CHECK(vars[2] < vars[1]);
}

TEST_CASE("delta target is met at the chernoff batch count") {
  // R = ceil(ln(1/delta)/D(1/2||3/4)) = 21 at delta = 0.05.
  ExperimentConfig cfg;
  cfg.qubits = 1;
  cfg.s = 1;
  cfg.batches = chernoff_batch_count(1, 0.05);
  cfg.m = static_cast<std::uint64_t>(cfg.batches) * 40;
  cfg.seed = 777;
  cfg.repeats = 300;
  cfg.epsilon = 2.0;
  cfg.unitary.kind = "haar";
  cfg.unitary.seed = 5;
  TaskSpec task;
  task.budget = 1.0;
  cfg.tasks = {task};
  REQUIRE(cfg.batches == 21);
  const StatReport rep = failure_rate_experiment(cfg);
  CHECK(rep.sample_mean <= 0.05);
  CHECK(rep.pass());
}

TEST_CASE("scan produces one row per admissible grid point") {
  ExperimentConfig cfg;
  cfg.qubits = 1;
  cfg.seed = 11;
  cfg.scan.dims = {2};
  cfg.scan.copies = {1, 2};
  cfg.scan.batch_sizes = {2, 4};
  cfg.scan.budgets = {1.0};
  cfg.scan.lambdas = {1};
  cfg.scan.shadows = 40;
  const CsvWriter csv = run_scan(cfg);
  const std::string text = csv.str();
  // header + 4 rows
  int lines = 0;
  for (std::size_t i = 0; i + 1 < text.size(); ++i)
    if (text[i] == '\r' && text[i + 1] == '\n') ++lines;
  CHECK(lines == 5);

  // Determinism: same config, same bytes.
  CHECK(run_scan(cfg).str() == text);
}
