#pragma once

#include "cseu/config.hpp"
#include "cseu/reports.hpp"

namespace cseu {

// Median-of-means failure-probability experiment: repeats the full
// learn-plus-predict pipeline and compares the empirical failure rate
// Pr[|E - truth| >= eps] against exp(-R D(1/2 || 3/4)). Also reports the
// per-batch failure rate, which must stay at or below 1/4 for the bound
// to be in force.
StatReport failure_rate_experiment(const ExperimentConfig& cfg);

// Variance/budget scan over the (d, s, q, B, lambda) grid; one CSV row per
// grid point.
CsvWriter run_scan(const ExperimentConfig& cfg);

// Constant-fitting run: measures worst empirical-to-bound ratios with unit
// constants at d = 2, s = 1 and freezes twice the observed ratio.
Calibration run_calibrate(std::uint64_t seed, int threads = 1);

}  // namespace cseu
