#pragma once

#include <string>
#include <vector>

#include "cseu/estimator.hpp"

namespace cseu {

inline constexpr const char* kCsvSchemaVersion = "cseu-csv-v1";

struct BoundCheck {
  std::string label;
  std::string constant;  // which bound/constant the verdict was made against
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Summary statistics plus bound verdicts for one experiment.
struct StatReport {
  std::string name;
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  double standard_error = 0.0;
  double ks_statistic = 0.0;
  double ks_p_value = 1.0;
  std::vector<BoundCheck> verdicts;

  bool pass() const;
};

std::string estimate_report_json(const EstimateReport& rep);
std::string stat_report_json(const StatReport& rep);

// RFC-4180 CSV writer: CRLF rows, minimal quoting. The schema version is
// carried as the first column of every row; the column layout is
// documented in docs/csv_schema.md.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  void add_row(const std::vector<std::string>& cells);
  std::string str() const;
  void save(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double v);

}  // namespace cseu
