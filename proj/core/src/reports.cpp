#include "cseu/reports.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace cseu {

bool StatReport::pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

std::string estimate_report_json(const EstimateReport& rep) {
  nlohmann::json j;
  j["estimate"] = rep.estimate;
  j["batch_values"] = rep.batch_values;
  j["empirical_variance"] = rep.empirical_variance;
  j["analytic_bound"] = rep.analytic_bound;
  j["bound_pass"] = rep.bound_pass;
  j["imag_residual"] = rep.imag_residual;
  j["d"] = rep.d;
  j["s"] = rep.s;
  j["rounds"] = rep.rounds;
  j["batches"] = rep.batches;
  j["batch_size"] = rep.batch_size;
  j["queries"] = rep.queries;
  return j.dump(2);
}

std::string stat_report_json(const StatReport& rep) {
  nlohmann::json j;
  j["name"] = rep.name;
  j["sample_mean"] = rep.sample_mean;
  j["sample_variance"] = rep.sample_variance;
  j["standard_error"] = rep.standard_error;
  j["ks_statistic"] = rep.ks_statistic;
  j["ks_p_value"] = rep.ks_p_value;
  j["pass"] = rep.pass();
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : rep.verdicts) {
    j["verdicts"].push_back({{"label", v.label},
                             {"constant", v.constant},
                             {"value", v.value},
                             {"bound", v.bound},
                             {"pass", v.pass}});
  }
  return j.dump(2);
}

namespace {

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {
  columns_.insert(columns_.begin(), "schema_version");
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() + 1 != columns_.size())
    throw std::invalid_argument("CsvWriter: cell count does not match header");
  std::vector<std::string> row;
  row.reserve(columns_.size());
  row.push_back(kCsvSchemaVersion);
  row.insert(row.end(), cells.begin(), cells.end());
  rows_.push_back(std::move(row));
}

std::string CsvWriter::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += "\r\n";
  };
  emit(columns_);
  for (const auto& row : rows_) emit(row);
  return out;
}

void CsvWriter::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("CsvWriter: cannot open " + path);
  out << str();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace cseu
