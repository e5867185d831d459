#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fkf::cli {

inline constexpr const char* kReportSchema = "fkf.report/1";

// One named value or check inside a report.
struct CheckResult {
  std::string name;
  std::optional<double> value_re;
  std::optional<double> value_im;
  std::optional<double> stderr_value;
  std::optional<std::int64_t> n_samples;
  std::optional<double> residual;
  std::optional<double> tolerance;
  std::optional<bool> pass;  // unset for report-only entries
  std::string note;
};

struct RunReport {
  std::vector<std::string> command;
  nlohmann::json domain = nlohmann::json::object();
  nlohmann::json params = nlohmann::json::object();
  std::vector<CheckResult> results;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;

  bool pass() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
  std::string to_text() const;
};

// Plot-ready sweep rows.
struct TableRow {
  double param = 0.0;
  double value_re = 0.0;
  double value_im = 0.0;
  double stderr_value = 0.0;
  bool operator==(const TableRow&) const = default;
};

std::string format_double(double v);  // %.17g
std::string table_to_csv(const std::vector<TableRow>& rows);
std::vector<TableRow> table_from_csv(std::string_view csv);
nlohmann::json table_to_json(const std::vector<TableRow>& rows);
std::vector<TableRow> table_from_json(const nlohmann::json& j);

}  // namespace fkf::cli
