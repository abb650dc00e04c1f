#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pfldg {

/// One asserted quantity: passes iff value <= threshold (or value >= threshold
/// when `lower_bound` is set).
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool lower_bound = false;
  bool pass = false;

  static Check at_most(std::string name, double value, double threshold);
  static Check at_least(std::string name, double value, double threshold);
};

/// Structured results of one experiment run.
struct ExperimentReport {
  std::string experiment;
  std::string mesh;
  int k = 0;
  int ell = 0;
  std::optional<double> c_min;
  std::optional<double> c_max;
  std::vector<Check> checks;
  /// Additional scalar results (reported, not asserted).
  std::map<std::string, double> metrics;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;

  bool passed() const;
};

/// JSON document with keys mesh, k, ell, c_min, c_max, checks[] plus metrics
/// and a metadata object holding `timestamp` when non-empty.
std::string to_json(const ExperimentReport& report, const std::string& timestamp = {});
std::string to_csv(const ExperimentReport& report);

/// Fixed-format number rendering used in CSV output (%.12e).
std::string format_number(double value);

}  // namespace pfldg
