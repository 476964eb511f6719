// cseu-sim: command-line front end for shadow-based unitary-channel
// estimation experiments. See README.md for the config format.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cseu/acceptance.hpp"
#include "cseu/config.hpp"
#include "cseu/experiments.hpp"
#include "cseu/oracles.hpp"
#include "cseu/otoc.hpp"
#include "cseu/reports.hpp"

namespace {

using namespace cseu;

struct GlobalArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::string> calibration_path;
};

ExperimentConfig resolve_config(const GlobalArgs& args, bool require_file) {
  ExperimentConfig cfg;
  if (!args.config_path.empty()) cfg = load_config(args.config_path);
  else if (require_file) throw std::invalid_argument("this subcommand needs --config FILE");
  if (args.seed) cfg.seed = *args.seed;
  if (args.out_dir) cfg.out_dir = *args.out_dir;
  if (args.threads) cfg.threads = *args.threads;
  if (args.calibration_path) cfg.calibration_file = *args.calibration_path;
  cfg.validate();
  return cfg;
}

Calibration resolve_calibration(const ExperimentConfig& cfg) {
  if (cfg.calibration_file) return load_calibration(*cfg.calibration_file);
  return default_calibration();
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
}

int cmd_learn(const GlobalArgs& args) {
  const ExperimentConfig cfg = resolve_config(args, true);
  const UnitaryOp u = make_unitary(cfg.unitary, cfg.dim());
  const CollectiveMeasurementSpec spec{cfg.s, cfg.mode};
  const ShadowData shadow =
      run_learning(u, spec, cfg.m, cfg.seed, cfg.unitary.kind + cfg.unitary.label, cfg.threads);
  const std::string path = out_path(cfg, "shadow.bin");
  save_shadow(shadow, path);
  std::printf("wrote %s (m=%zu, d=%d, s=%d, queries=%llu)\n", path.c_str(), shadow.rounds(),
              shadow.dim(), shadow.spec.s,
              static_cast<unsigned long long>(shadow.queries()));
  return 0;
}

int cmd_predict(const GlobalArgs& args, const std::string& shadow_path) {
  const ExperimentConfig cfg = resolve_config(args, true);
  if (cfg.tasks.empty()) throw std::invalid_argument("predict: config has no tasks");
  const Calibration cal = resolve_calibration(cfg);
  const ShadowData shadow = load_shadow(shadow_path);
  const UnitaryOp u = make_unitary(cfg.unitary, shadow.dim());

  CounterRng task_rng = CounterRng(cfg.seed).derive(2, 0);
  const auto tasks = make_tasks(cfg.tasks, shadow.dim(), task_rng);
  const auto reports = predict_many(shadow, tasks, EstimatorParams{cfg.batches, true}, cal);

  std::string json = "[\n";
  CsvWriter csv({"task", "estimate", "empirical_variance", "analytic_bound", "pass"});
  bool all_pass = true;
  for (std::size_t t = 0; t < reports.size(); ++t) {
    json += estimate_report_json(reports[t]);
    json += (t + 1 < reports.size()) ? ",\n" : "\n";
    const bool pass = reports[t].bound_pass;
    all_pass = all_pass && pass;
    csv.add_row({std::to_string(t), format_double(reports[t].estimate),
                 format_double(reports[t].empirical_variance),
                 format_double(reports[t].analytic_bound), pass ? "true" : "false"});
  }
  json += "]\n";
  write_text(out_path(cfg, "reports.json"), json);
  csv.save(out_path(cfg, "reports.csv"));
  std::printf("wrote %s and reports.csv (%zu tasks)\n",
              out_path(cfg, "reports.json").c_str(), reports.size());
  return all_pass ? 0 : 1;
}

int cmd_otoc(const GlobalArgs& args, const std::string& shadow_path, const std::string& w_label,
             const std::string& v_label) {
  const ExperimentConfig cfg = resolve_config(args, true);
  const Calibration cal = resolve_calibration(cfg);
  const ShadowData shadow = load_shadow(shadow_path);
  const OtocTask task = OtocTask::at_infinite_temperature(
      Observable(pauli_string(w_label)), Observable(pauli_string(v_label)));
  const auto report = otoc_estimate(shadow, task, cal, cfg.threads);
  write_text(out_path(cfg, "otoc.json"), estimate_report_json(report) + "\n");
  std::printf("otoc estimate %.6f (variance bound %.3g) -> %s\n", report.estimate,
              report.analytic_bound, out_path(cfg, "otoc.json").c_str());
  return 0;
}

int cmd_validate(const GlobalArgs& args) {
  ExperimentConfig cfg;
  try {
    cfg = resolve_config(args, false);
  } catch (const std::exception&) {
    cfg = ExperimentConfig{};
  }
  const Calibration cal = resolve_calibration(cfg);
  const std::uint64_t seed = args.seed.value_or(20240817ull);
  const int threads = args.threads.value_or(cfg.threads);
  const AcceptanceLimits lim{cfg.sigma_limit, cfg.ks_p_min};
  const auto results = acceptance::run_acceptance(seed, threads, cal, lim);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("[%s] criterion %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}

int cmd_scan(const GlobalArgs& args) {
  const ExperimentConfig cfg = resolve_config(args, true);
  const CsvWriter csv = run_scan(cfg);
  const std::string path = out_path(cfg, "scan.csv");
  csv.save(path);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_calibrate(const GlobalArgs& args) {
  ExperimentConfig cfg;
  try {
    cfg = resolve_config(args, false);
  } catch (const std::exception&) {
    cfg = ExperimentConfig{};
  }
  const std::uint64_t seed = args.seed.value_or(7ull);
  const Calibration cal = run_calibrate(seed, args.threads.value_or(1));
  const std::string path = out_path(cfg, "calibration.txt");
  save_calibration(cal, path);
  std::printf(
      "calibrated: batch_var_c=%.2f covariance_c=%.2f avgcase_c=%.2f direct_c=%.2f otoc_var_c=%.2f "
      "otoc_budget_c=%.2f query_budget_c=%.2f -> %s\n",
      cal.batch_var_c, cal.covariance_c, cal.avgcase_c, cal.direct_c, cal.otoc_var_c, cal.otoc_budget_c,
      cal.query_budget_c, path.c_str());
  return 0;
}

int cmd_failure_rate(const GlobalArgs& args) {
  const ExperimentConfig cfg = resolve_config(args, true);
  const StatReport rep = failure_rate_experiment(cfg);
  write_text(out_path(cfg, "failure_rate.json"), stat_report_json(rep) + "\n");
  std::printf("%s\n", stat_report_json(rep).c_str());
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classical-shadow estimation of unitary channels"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs args;
  app.add_option("--config", args.config_path, "JSON experiment config");
  std::uint64_t seed_opt = 0;
  auto* seed_flag = app.add_option("--seed", seed_opt, "override config seed");
  std::string out_opt;
  auto* out_flag = app.add_option("--out", out_opt, "output directory");
  int threads_opt = 1;
  auto* threads_flag = app.add_option("--threads", threads_opt, "worker threads");
  std::string cal_opt;
  auto* cal_flag = app.add_option("--calibration", cal_opt, "calibration constants file");

  std::string shadow_path = "shadow.bin";
  std::string w_label = "X", v_label = "Z";

  auto* learn = app.add_subcommand("learn", "run the learning phase and write shadow data");
  auto* predict = app.add_subcommand("predict", "predict task expectations from shadow data");
  predict->add_option("--shadow", shadow_path, "shadow data file");
  auto* otoc = app.add_subcommand("otoc", "estimate an OTOC from shadow data");
  otoc->add_option("--shadow", shadow_path, "shadow data file");
  otoc->add_option("--w", w_label, "Pauli label for W");
  otoc->add_option("--v", v_label, "Pauli label for V");
  auto* validate = app.add_subcommand("validate", "run the full oracle/acceptance suite");
  auto* scan = app.add_subcommand("scan", "variance/budget scan over a parameter grid");
  auto* calibrate = app.add_subcommand("calibrate", "fit the bound constants");
  auto* failure = app.add_subcommand("failure-rate", "median-of-means failure experiment");

  CLI11_PARSE(app, argc, argv);

  if (*seed_flag) args.seed = seed_opt;
  if (*out_flag) args.out_dir = out_opt;
  if (*threads_flag) args.threads = threads_opt;
  if (*cal_flag) args.calibration_path = cal_opt;

  try {
    if (*learn) return cmd_learn(args);
    if (*predict) return cmd_predict(args, shadow_path);
    if (*otoc) return cmd_otoc(args, shadow_path, w_label, v_label);
    if (*validate) return cmd_validate(args);
    if (*scan) return cmd_scan(args);
    if (*calibrate) return cmd_calibrate(args);
    if (*failure) return cmd_failure_rate(args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
