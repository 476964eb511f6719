#include "cseu/calibration.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cseu {

const Calibration& default_calibration() {
  // Frozen from `cseu-sim calibrate --seed 7` at d=2, s=1 (see
  // share/calibration.txt).
  static const Calibration cal = [] {
    Calibration c;
    c.version = 1;
    c.batch_var_c = 97.01;
    c.covariance_c = 24.20;
    c.avgcase_c = 25.02;
    c.direct_c = 3.93;
    c.otoc_var_c = 61.22;
    c.otoc_budget_c = 32.0;
    c.query_budget_c = 32.0;
    return c;
  }();
  return cal;
}

Calibration load_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_calibration: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("cseu-calibration", 0) != 0)
    throw std::runtime_error("load_calibration: bad magic line");
  Calibration cal;
  {
    std::istringstream ss(line);
    std::string magic, ver;
    ss >> magic >> ver;
    if (ver.size() < 2 || ver[0] != 'v')
      throw std::runtime_error("load_calibration: bad version tag");
    cal.version = std::stoi(ver.substr(1));
  }
  std::map<std::string, double*> fields = {
      {"batch_var_c", &cal.batch_var_c},           {"covariance_c", &cal.covariance_c},
      {"avgcase_c", &cal.avgcase_c},       {"direct_c", &cal.direct_c},
      {"otoc_var_c", &cal.otoc_var_c},     {"otoc_budget_c", &cal.otoc_budget_c},
      {"query_budget_c", &cal.query_budget_c},
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key;
    double value;
    if (!(ss >> key >> value)) throw std::runtime_error("load_calibration: bad line: " + line);
    auto it = fields.find(key);
    if (it == fields.end()) throw std::runtime_error("load_calibration: unknown key: " + key);
    *it->second = value;
  }
  return cal;
}

void save_calibration(const Calibration& cal, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_calibration: cannot open " + path);
  out << "cseu-calibration v" << cal.version << "\n";
  out << "batch_var_c " << cal.batch_var_c << "\n";
  out << "covariance_c " << cal.covariance_c << "\n";
  out << "avgcase_c " << cal.avgcase_c << "\n";
  out << "direct_c " << cal.direct_c << "\n";
  out << "otoc_var_c " << cal.otoc_var_c << "\n";
  out << "otoc_budget_c " << cal.otoc_budget_c << "\n";
  out << "query_budget_c " << cal.query_budget_c << "\n";
}

double kl_divergence(double x, double y) {
  if (x <= 0.0 || x >= 1.0 || y <= 0.0 || y >= 1.0)
    throw std::invalid_argument("kl_divergence: arguments must lie in (0, 1)");
  return x * std::log(x / y) + (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
}

int chernoff_batch_count(int tasks, double delta) {
  if (tasks < 1 || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("chernoff_batch_count: bad arguments");
  const double r = std::log(static_cast<double>(tasks) / delta) / kl_divergence(0.5, 0.75);
  int out = static_cast<int>(std::ceil(r));
  if (out < 1) out = 1;
  if (out % 2 == 0) ++out;
  return out;
}

double batch_variance_bound(int d, int s, std::uint64_t q, double budget, double purity, double c) {
  if (d < 2 || s < 1 || q < 1 || budget <= 0.0 || purity <= 0.0)
    throw std::invalid_argument("batch_variance_bound: bad arguments");
  const double dd = d, ss = s, qq = static_cast<double>(q);
  const double first = (dd * purity / ss + std::min(1.0, budget * purity)) / qq;
  const double second = (std::pow(dd / ss, 4) + 1.0) * budget * purity / (qq * qq);
  return c * (first + second);
}

std::uint64_t worst_case_query_budget(int d, int s, double budget, int tasks, double epsilon,
                                double delta, double c) {
  if (s < 1 || budget < 1.0 || epsilon <= 0.0 || epsilon >= 1.0 || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("worst_case_query_budget: bad arguments");
  const double dd = d, ss = s;
  const double core = std::max(dd, ss) / (epsilon * epsilon) +
                      std::max(dd * dd, ss * ss) * std::sqrt(budget) / (ss * epsilon);
  return static_cast<std::uint64_t>(std::ceil(c * core * std::log(tasks / delta)));
}

double avgcase_variance_bound(int d, int s, int lambda, double budget, std::uint64_t m,
                              double c) {
  if (s < 1 || s > d || lambda < 1 || lambda > d || m < 1)
    throw std::invalid_argument("avgcase_variance_bound: needs 1 <= s <= d, 1 <= lambda <= d");
  const double dd = d, ss = s, ll = lambda, mm = static_cast<double>(m);
  const double first = (dd / (ss * ll) + std::min(1.0, budget / ll)) / mm;
  const double second = std::pow(dd, 4) * budget / (mm * mm * std::pow(ss, 4) * ll);
  return c * (first + second);
}

double otoc_variance_bound(int d, int s, std::uint64_t m, double c) {
  if (d < 2 || s < 1 || m < 2) throw std::invalid_argument("otoc_variance_bound: bad arguments");
  const double dd = d, ss = s, mm = static_cast<double>(m);
  const double r2 = dd * dd / (ss * ss) + 1.0;
  const double r4 = std::pow(dd / ss, 4) + 1.0;
  return c * (r2 / mm + dd * dd * r4 / (mm * mm));
}

std::uint64_t otoc_query_budget(int d, int s, double epsilon, double c) {
  if (epsilon <= 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("otoc_query_budget: epsilon must lie in (0, 1)");
  const double dd = d, ss = s, e = epsilon;
  double queries;
  if (s == 1) {
    queries = dd * dd / (e * e) + dd * dd * dd / e;
  } else if (s == d) {
    queries = dd / (e * e) + dd * dd / e;
  } else {
    const double m = (dd * dd / (ss * ss) + 1.0) / (e * e) +
                     dd * std::sqrt(std::pow(dd / ss, 4) + 1.0) / e;
    queries = m * ss;
  }
  return static_cast<std::uint64_t>(std::ceil(c * queries));
}

}  // namespace cseu
