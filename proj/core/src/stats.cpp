#include "cseu/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cseu {

double RunningStats::standard_error() const {
  return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

namespace {

// Survival function of the Kolmogorov distribution.
double kolmogorov_q(double t) {
  if (t < 1e-8) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  const std::size_t n = samples.size();
  if (n < 100) throw std::invalid_argument("ks_test: need at least 100 samples");
  std::sort(samples.begin(), samples.end());
  double dmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(samples[i]);
    dmax = std::max(dmax, static_cast<double>(i + 1) / n - f);
    dmax = std::max(dmax, f - static_cast<double>(i) / n);
  }
  const double sn = std::sqrt(static_cast<double>(n));
  const double t = (sn + 0.12 + 0.11 / sn) * dmax;
  return {dmax, kolmogorov_q(t)};
}

double beta_cdf_int(int a, int b, double x) {
  if (a < 1 || b < 1) throw std::invalid_argument("beta_cdf_int: parameters must be >= 1");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // I_x(a, b) = P[Bin(a+b-1, x) >= a]
  const int n = a + b - 1;
  double coeff = 1.0;  // binomial(n, j) x^j (1-x)^(n-j), built up from j = n
  double sum = 0.0;
  // Work downward from j = n for numerical stability of the recurrence.
  double term = std::pow(x, n);
  for (int j = n; j >= a; --j) {
    sum += term * coeff;
    coeff = coeff * j / (n - j + 1.0);
    term = term / x * (1.0 - x);
  }
  return std::min(1.0, sum);
}

double sample_median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("sample_median: empty input");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  if (values.size() % 2 == 1) return values[mid];
  const double hi = values[mid];
  const double lo = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lo + hi);
}

}  // namespace cseu
