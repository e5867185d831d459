#include "report.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "fkf/error.hpp"

namespace fkf::cli {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool RunReport::pass() const {
  for (const auto& r : results)
    if (r.pass && !*r.pass) return false;
  return true;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["domain"] = domain;
  j["params"] = params;
  j["wall_time_s"] = wall_time_s;
  j["seed"] = seed;
  j["pass"] = pass();
  auto& res = j["results"] = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json e;
    e["name"] = r.name;
    if (r.value_re) e["value_re"] = *r.value_re;
    if (r.value_im) e["value_im"] = *r.value_im;
    if (r.stderr_value) e["stderr"] = *r.stderr_value;
    if (r.n_samples) e["n_samples"] = *r.n_samples;
    if (r.residual) e["residual"] = *r.residual;
    if (r.tolerance) e["tolerance"] = *r.tolerance;
    e["pass"] = r.pass ? nlohmann::json(*r.pass) : nlohmann::json(nullptr);
    if (!r.note.empty()) e["note"] = r.note;
    res.push_back(std::move(e));
  }
  return j;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string RunReport::to_csv() const {
  std::ostringstream os;
  os << "name,value_re,value_im,stderr,residual,tolerance,pass\n";
  for (const auto& r : results)
    os << r.name << ',' << opt(r.value_re) << ',' << opt(r.value_im) << ',' << opt(r.stderr_value) << ','
       << opt(r.residual) << ',' << opt(r.tolerance) << ',' << (r.pass ? (*r.pass ? "PASS" : "FAIL") : "INFO") << '\n';
  return os.str();
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  for (const auto& r : results) {
    os << (r.pass ? (*r.pass ? "PASS " : "FAIL ") : "INFO ") << r.name;
    if (r.value_re) os << " value=" << format_double(*r.value_re);
    if (r.residual) os << " residual=" << format_double(*r.residual);
    if (r.tolerance) os << " tol=" << format_double(*r.tolerance);
    if (!r.note.empty()) os << " (" << r.note << ")";
    os << '\n';
  }
  os << (pass() ? "overall PASS" : "overall FAIL") << '\n';
  return os.str();
}

std::string table_to_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "param,value_re,value_im,stderr\n";
  for (const auto& r : rows)
    os << format_double(r.param) << ',' << format_double(r.value_re) << ',' << format_double(r.value_im) << ','
       << format_double(r.stderr_value) << '\n';
  return os.str();
}

std::vector<TableRow> table_from_csv(std::string_view csv) {
  std::vector<TableRow> rows;
  std::istringstream is{std::string(csv)};
  std::string line;
  if (!std::getline(is, line) || line != "param,value_re,value_im,stderr") throw InvalidArgument("unexpected table header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double v[4];
    const char* p = line.c_str();
    for (int k = 0; k < 4; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(p, &end);
      if (end == p || (k < 3 && *end != ',') || (k == 3 && *end != '\0')) throw InvalidArgument("malformed table row");
      p = end + 1;
    }
    rows.push_back({v[0], v[1], v[2], v[3]});
  }
  return rows;
}

nlohmann::json table_to_json(const std::vector<TableRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"param", r.param}, {"value_re", r.value_re}, {"value_im", r.value_im}, {"stderr", r.stderr_value}});
  return j;
}

std::vector<TableRow> table_from_json(const nlohmann::json& j) {
  std::vector<TableRow> rows;
  for (const auto& e : j)
    rows.push_back({e.at("param").get<double>(), e.at("value_re").get<double>(), e.at("value_im").get<double>(),
                    e.at("stderr").get<double>()});
  return rows;
}

}  // namespace fkf::cli
