#pragma once

#include <cstdint>
#include <string>

namespace cseu {

// The analytic variance/budget bounds hold up to absolute constants. A
// one-off calibration run (see the `calibrate` subcommand) measures the
// worst empirical-to-bound ratio with unit constant and freezes twice
// that value here. The file form is versioned plain text.
struct Calibration {
  int version = 1;
  double batch_var_c = 1.0;        // batch-mean variance bound
  double covariance_c = 1.0;       // per-pattern covariance bounds
  double avgcase_c = 1.0;      // average-case variance bound
  double direct_c = 1.0;       // single-snapshot variance bound
  double otoc_var_c = 1.0;     // OTOC estimator variance
  double otoc_budget_c = 1.0;  // OTOC query budget
  double query_budget_c = 1.0;         // worst-case query budget
};

const Calibration& default_calibration();

Calibration load_calibration(const std::string& path);
void save_calibration(const Calibration& cal, const std::string& path);

// Binary KL divergence D(x || y), in nats.
double kl_divergence(double x, double y);

// Batch count R = ceil(ln(M/delta) / D(1/2 || 3/4)) for the median-of-means
// failure target, bumped to odd.
int chernoff_batch_count(int tasks, double delta);

// Variance bound for one batch mean:
// C [ (d p / s + min(1, B p)) / q + (d^4/s^4 + 1) B p / q^2 ].
double batch_variance_bound(int d, int s, std::uint64_t q, double budget, double purity, double c);

// Worst-case query budget
// C (max(d,s)/eps^2 + max(d^2,s^2) sqrt(B)/(s eps)) ln(M/delta).
std::uint64_t worst_case_query_budget(int d, int s, double budget, int tasks, double epsilon,
                                double delta, double c);

// Average-case variance bound over rho ~ pi_{d,lambda} (s <= d, lambda <= d):
// C [ (d/(s lambda) + min(1, B/lambda)) / m + d^4 B / (m^2 s^4 lambda) ].
double avgcase_variance_bound(int d, int s, int lambda, double budget, std::uint64_t m,
                              double c);

// OTOC estimator variance bound C [ (d^2/s^2 + 1)/m + d^2 (d^4/s^4 + 1)/m^2 ].
double otoc_variance_bound(int d, int s, std::uint64_t m, double c);

// Query budget m*s for OTOC estimation at error eps.
std::uint64_t otoc_query_budget(int d, int s, double epsilon, double c);

}  // namespace cseu
