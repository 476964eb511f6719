#include "cseu/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cseu {

void ExperimentConfig::validate() const {
  if (qubits < 1 || dim() > 16)
    throw std::invalid_argument("config: qubit count must give d = 2^n <= 16");
  if (s < 1) throw std::invalid_argument("config: s must be >= 1");
  if (m < 2 * static_cast<std::uint64_t>(batches))
    throw std::invalid_argument("config: need m >= 2R");
  for (const auto& t : tasks) {
    if (t.budget < 1.0 || t.budget > dim())
      throw std::invalid_argument("config: task budget must lie in [1, d]");
    if (t.lambda < 1) throw std::invalid_argument("config: lambda must be >= 1");
  }
  if (mode == MeasurementMode::Rgcm && s != 1)
    throw std::invalid_argument("config: rgcm mode requires s = 1");
}

namespace {

StateSource state_source_from_string(const std::string& s) {
  if (s == "pure") return StateSource::Pure;
  if (s == "induced") return StateSource::Induced;
  if (s == "maximally-mixed") return StateSource::MaximallyMixed;
  throw std::invalid_argument("config: unknown state source: " + s);
}

TaskSpec parse_task(const nlohmann::json& j) {
  TaskSpec t;
  if (j.contains("style")) t.style = observable_style_from_string(j.at("style"));
  if (j.contains("budget")) t.budget = j.at("budget").get<double>();
  if (j.contains("state")) {
    const auto& st = j.at("state");
    t.source = state_source_from_string(st.value("kind", "pure"));
    t.lambda = st.value("lambda", 1);
  }
  return t;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  ExperimentConfig c;
  c.qubits = j.value("n", c.qubits);
  c.s = j.value("s", c.s);
  c.m = j.value("m", c.m);
  c.batches = j.value("batches", c.batches);
  if (j.contains("mode")) c.mode = measurement_mode_from_string(j.at("mode"));
  c.seed = j.value("seed", c.seed);
  c.threads = j.value("threads", c.threads);
  c.repeats = j.value("repeats", c.repeats);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.delta = j.value("delta", c.delta);
  c.sigma_limit = j.value("sigma_limit", c.sigma_limit);
  c.ks_p_min = j.value("ks_p_min", c.ks_p_min);
  if (j.contains("calibration_file"))
    c.calibration_file = j.at("calibration_file").get<std::string>();
  if (j.contains("unitary")) {
    const auto& u = j.at("unitary");
    c.unitary.kind = u.value("kind", "haar");
    c.unitary.label = u.value("label", "");
    c.unitary.seed = u.value("seed", static_cast<std::uint64_t>(0));
  }
  if (j.contains("tasks"))
    for (const auto& t : j.at("tasks")) c.tasks.push_back(parse_task(t));
  if (j.contains("scan")) {
    const auto& s = j.at("scan");
    if (s.contains("d")) c.scan.dims = s.at("d").get<std::vector<int>>();
    if (s.contains("s")) c.scan.copies = s.at("s").get<std::vector<int>>();
    if (s.contains("q"))
      c.scan.batch_sizes = s.at("q").get<std::vector<std::uint64_t>>();
    if (s.contains("budget")) c.scan.budgets = s.at("budget").get<std::vector<double>>();
    if (s.contains("lambda")) c.scan.lambdas = s.at("lambda").get<std::vector<int>>();
    if (s.contains("shadows")) c.scan.shadows = s.at("shadows").get<std::uint64_t>();
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

UnitaryOp make_unitary(const UnitarySpec& spec, int d) {
  if (spec.kind == "identity") return UnitaryOp::identity_op(d);
  if (spec.kind == "haar") {
    CounterRng rng(spec.seed, /*stream=*/0xD1CEu);
    return haar_unitary(d, rng);
  }
  if (spec.kind == "clifford") {
    int n = 0;
    while ((1 << n) < d) ++n;
    CounterRng rng(spec.seed, 0xD1CEu);
    return random_clifford(n, rng);
  }
  if (spec.kind == "pauli") {
    if ((1u << spec.label.size()) != static_cast<unsigned>(d))
      throw std::invalid_argument("config: pauli label length does not match d");
    return UnitaryOp(pauli_string(spec.label));
  }
  throw std::invalid_argument("config: unknown unitary kind: " + spec.kind);
}

std::vector<PredictionTask> make_tasks(const std::vector<TaskSpec>& specs, int d,
                                       CounterRng& rng) {
  std::vector<PredictionTask> out;
  out.reserve(specs.size());
  for (const auto& spec : specs) {
    Observable obs = random_observable(d, spec.budget, rng, spec.style);
    DensityOp rho = [&]() -> DensityOp {
      switch (spec.source) {
        case StateSource::Pure: return DensityOp::from_pure(haar_state(d, rng));
        case StateSource::Induced: return induced_density(d, spec.lambda, rng);
        case StateSource::MaximallyMixed: return DensityOp::maximally_mixed(d);
      }
      throw std::logic_error("make_tasks: unreachable");
    }();
    out.emplace_back(std::move(obs), std::move(rho), spec.budget);
  }
  return out;
}

}  // namespace cseu
