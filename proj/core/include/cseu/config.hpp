#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cseu/ensembles.hpp"
#include "cseu/estimator.hpp"
#include "cseu/measurement.hpp"

namespace cseu {

enum class StateSource { Pure, Induced, MaximallyMixed };

struct TaskSpec {
  ObservableStyle style = ObservableStyle::Gue;
  double budget = 1.0;
  StateSource source = StateSource::Pure;
  int lambda = 1;  // environment dimension for induced states
};

struct UnitarySpec {
  std::string kind = "haar";  // haar | identity | clifford | pauli
  std::string label;          // pauli string for kind = pauli
  std::uint64_t seed = 0;
};

struct ScanGrid {
  std::vector<int> dims{2, 4};
  std::vector<int> copies{1, 2, 4};
  std::vector<std::uint64_t> batch_sizes{2, 8, 32};
  std::vector<double> budgets{1.0};
  std::vector<int> lambdas{1};
  std::uint64_t shadows = 200;
};

struct ExperimentConfig {
  int qubits = 1;
  int s = 1;
  std::uint64_t m = 100;
  int batches = 1;
  MeasurementMode mode = MeasurementMode::ContinuousHaar;
  std::uint64_t seed = 1;
  int threads = 1;
  std::uint64_t repeats = 100;
  std::string out_dir = ".";
  double epsilon = 0.1;
  double delta = 0.05;
  double sigma_limit = 5.0;  // statistical pass threshold, in standard errors
  double ks_p_min = 0.01;    // KS p-value pass threshold
  UnitarySpec unitary;
  std::vector<TaskSpec> tasks;
  ScanGrid scan;
  std::optional<std::string> calibration_file;

  int dim() const { return 1 << qubits; }
  void validate() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);

UnitaryOp make_unitary(const UnitarySpec& spec, int d);
std::vector<PredictionTask> make_tasks(const std::vector<TaskSpec>& specs, int d,
                                       CounterRng& rng);

}  // namespace cseu
