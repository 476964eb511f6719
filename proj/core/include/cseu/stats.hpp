#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace cseu {

struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double standard_error() const;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// One-sample Kolmogorov-Smirnov test with the asymptotic p-value
// (Stephens' small-sample correction). Needs at least 100 samples.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

// CDF of Beta(a, b) for integer parameters, via the binomial tail sum.
double beta_cdf_int(int a, int b, double x);

double sample_median(std::vector<double> values);

}  // namespace cseu
