#pragma once

#include <cstdint>
#include <vector>

#include "cseu/calibration.hpp"
#include "cseu/ensembles.hpp"
#include "cseu/measurement.hpp"

namespace cseu {

// An (O, rho) pair to predict Tr(O U rho U^dag) for, with the norm budget
// the observable was certified against.
struct PredictionTask {
  Observable observable;
  DensityOp state;
  double budget;
  double purity;

  PredictionTask(Observable o, DensityOp rho, double b);
};

struct EstimatorParams {
  int batches = 1;           // R; bumped to the next odd number
  bool drop_remainder = true;

  int normalized_batches() const;
};

struct EstimateReport {
  double estimate = 0.0;
  std::vector<double> batch_values;
  double empirical_variance = 0.0;
  double analytic_bound = 0.0;
  bool bound_pass = true;  // empirical_variance <= analytic_bound
  double imag_residual = 0.0;
  // provenance
  int d = 0;
  int s = 1;
  std::uint64_t rounds = 0;
  int batches = 0;
  std::uint64_t batch_size = 0;
  std::uint64_t queries = 0;
};

// Coefficients of X = a (phi (x) psi^T) - b (I (x) I):
// a = d(d+1)(d+s)/s, b = (d+1+s)/s.
struct SnapshotCoefficients {
  double a = 0.0;
  double b = 0.0;
};
SnapshotCoefficients snapshot_coefficients(int d, int s);

// Tr[(O (x) rho^T) X] for one snapshot.
double linear_single(const Snapshot& snap, const PredictionTask& task);

// The ordered quadratic form d^-1 Tr[(O (x) rho^T) X_i X_j]; complex in
// general, conjugated under i <-> j.
Complex quadratic_pair_ordered(const Snapshot& si, const Snapshot& sj,
                               const PredictionTask& task);
// Unordered pair value: the average of the two orderings, which is real.
double quadratic_pair(const Snapshot& si, const Snapshot& sj, const PredictionTask& task);

// Z = [q(q-1)d]^-1 sum_{i != j} Tr[(O (x) rho^T) X_i X_j] over one batch,
// evaluated through Gram matrices in O(q^2 d + q d^2) arithmetic.
double batch_mean(const std::vector<Snapshot>& batch, const PredictionTask& task);

// Median of R batch means plus diagnostics; batches of q = floor(m/R),
// remainder dropped.
EstimateReport median_of_means(const ShadowData& shadow, const PredictionTask& task,
                               const EstimatorParams& params,
                               const Calibration& cal = default_calibration());

// Plain average of the linear single-snapshot estimates (the baseline).
EstimateReport direct_mean_estimate(const ShadowData& shadow, const PredictionTask& task,
                                    const Calibration& cal = default_calibration());

// One report per task from the same shadow data; the task-independent
// Gram matrices are computed once and shared.
std::vector<EstimateReport> predict_many(const ShadowData& shadow,
                                         const std::vector<PredictionTask>& tasks,
                                         const EstimatorParams& params,
                                         const Calibration& cal = default_calibration());

}  // namespace cseu
