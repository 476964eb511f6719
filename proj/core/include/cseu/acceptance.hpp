#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cseu/calibration.hpp"

namespace cseu {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Statistical pass thresholds; the defaults are the documented ones and
// can be overridden from the experiment config.
struct AcceptanceLimits {
  double sigma_limit = 5.0;
  double ks_p_min = 0.01;
};

// The ten acceptance criteria, at desk scale with pinned seeds. Each
// returns a one-line verdict; run_acceptance executes all of them in
// order.
namespace acceptance {

CriterionResult unbiasedness(std::uint64_t seed, int threads,
                             const AcceptanceLimits& lim = {});
CriterionResult sampler_correctness(std::uint64_t seed, const AcceptanceLimits& lim = {});
CriterionResult moment_oracles(std::uint64_t seed, const AcceptanceLimits& lim = {});
CriterionResult exact_variance(std::uint64_t seed, const Calibration& cal,
                               const AcceptanceLimits& lim = {});
CriterionResult estimator_separation(std::uint64_t seed, int threads);
CriterionResult variance_scaling(std::uint64_t seed);
CriterionResult median_suppression(std::uint64_t seed, int threads);
CriterionResult average_case(std::uint64_t seed, const Calibration& cal);
CriterionResult otoc_checks(std::uint64_t seed, const AcceptanceLimits& lim = {});
CriterionResult expansion_vs_dense(std::uint64_t seed);

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, int threads,
                                            const Calibration& cal = default_calibration(),
                                            const AcceptanceLimits& lim = {});

}  // namespace acceptance

}  // namespace cseu
