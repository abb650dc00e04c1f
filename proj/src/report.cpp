#include "pfldg/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace pfldg {

Check Check::at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, false, std::isfinite(value) && value <= threshold};
}

Check Check::at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, true, std::isfinite(value) && value >= threshold};
}

bool ExperimentReport::passed() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

namespace {

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::string to_json(const ExperimentReport& r, const std::string& timestamp) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["mesh"] = r.mesh;
  j["k"] = r.k;
  j["ell"] = r.ell;
  j["c_min"] = r.c_min ? number_or_null(*r.c_min) : nlohmann::json(nullptr);
  j["c_max"] = r.c_max ? number_or_null(*r.c_max) : nlohmann::json(nullptr);
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"value", number_or_null(c.value)},
                           {"threshold", c.threshold},
                           {"kind", c.lower_bound ? ">=" : "<="},
                           {"pass", c.pass}});
  }
  j["passed"] = r.passed();
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [key, value] : r.metrics) metrics[key] = number_or_null(value);
  j["metrics"] = metrics;
  if (!timestamp.empty()) j["metadata"] = {{"timestamp", timestamp}};
  return j.dump(2) + "\n";
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", value);
  return buf;
}

std::string to_csv(const ExperimentReport& r) {
  std::ostringstream out;
  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  };
  write_row(r.csv_header);
  for (const auto& row : r.csv_rows) write_row(row);
  return out.str();
}

}  // namespace pfldg
