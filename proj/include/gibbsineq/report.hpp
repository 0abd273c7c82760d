// Copyright 2026 The gibbsineq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON and CSV serialization of campaign reports. JSON objects use sorted
// keys (nlohmann::json's default std::map) and shortest round-trip floats;
// non-finite values are written as null.

#ifndef GIBBSINEQ_REPORT_HPP
#define GIBBSINEQ_REPORT_HPP

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "gibbsineq/suite.hpp"

namespace gibbsineq {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "1.0.0";

/// Failing instances serialized with their matrices, at most this many.
inline constexpr std::size_t kMaxSerializedFailures = 16;

inline Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json json_number(const std::optional<double>& v) {
  return v ? json_number(*v) : Json(nullptr);
}

/// [[re, im], ...] row-major.
inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const FamilyAggregate& a) {
  Json j = {{"count", a.count}, {"pass_count", a.pass_count}};
  if (a.count > 0) {
    j["worst_slack"] = json_number(a.worst_slack);
    j["worst_instance"] = a.worst_instance;
    j["worst_instance_seed"] = a.worst_instance_seed;
    if (!a.worst_params.empty()) j["worst_params"] = a.worst_params;
  }
  return j;
}

inline Json to_json(const FamilyTable& t) {
  Json j = Json::object();
  for (const auto& [name, agg] : t) j[name] = to_json(agg);
  return j;
}

inline Json to_json(const InequalityParams& p) {
  Json j = Json::object();
  if (p.n) j["n"] = *p.n;
  if (p.k) j["k"] = *p.k;
  if (p.p) j["p"] = json_number(*p.p);
  if (p.q) j["q"] = json_number(*p.q);
  j["beta"] = json_number(p.beta);
  return j;
}

inline Json to_json(const InequalityReport& r) {
  Json j = {{"family", to_string(r.family)},
            {"params", to_json(r.params)},
            {"lhs", json_number(r.lhs)},
            {"rhs", json_number(r.rhs)},
            {"slack_left", json_number(r.slack_left)},
            {"slack_right", json_number(r.slack_right)},
            {"pass", r.pass},
            {"tol", r.tol}};
  if (r.mid) j["mid"] = json_number(*r.mid);
  return j;
}

inline Json to_json(const InstanceRecord& r) {
  Json checks = Json::array();
  for (const auto& c : r.reports) checks.push_back(to_json(c));
  Json j = {{"index", r.index},   {"seed", r.seed},     {"label", r.label},
            {"beta", r.beta},     {"passed", r.passed()}, {"checks", std::move(checks)}};
  if (r.error) j["error"] = *r.error;
  return j;
}

inline Json to_json(const FidelityReport& r) {
  return {{"beta", json_number(r.beta)},
          {"chi_spectral_form1", json_number(r.chi_spectral_form1)},
          {"chi_spectral_form2", json_number(r.chi_spectral_form2)},
          {"chi_quantum_term", json_number(r.chi_quantum_term)},
          {"chi_classical_term", json_number(r.chi_classical_term)},
          {"chi_fd_one_sided", json_number(r.chi_fd_one_sided)},
          {"chi_fd_two_sided", json_number(r.chi_fd_two_sided)},
          {"bound_lower", json_number(r.bound_lower)},
          {"bound_upper", json_number(r.bound_upper)},
          {"susceptibility_fd", json_number(r.susceptibility_fd)},
          {"low_temperature", r.low_temperature},
          {"degenerate_limit_applied", r.degenerate_limit_applied},
          {"warnings", r.warnings}};
}

inline Json to_json(const ExpansionCheck& c) {
  return {{"x", json_number(c.x)},
          {"y", json_number(c.y)},
          {"trace_x", json_number(c.trace_x)},
          {"trace_y", json_number(c.trace_y)},
          {"trace_y_assembled", json_number(c.trace_y_assembled)},
          {"fidelity_direct", json_number(c.fidelity_direct)},
          {"fidelity_expansion", json_number(c.fidelity_expansion)},
          {"residual", json_number(c.residual)},
          {"residual_half", json_number(c.residual_half)},
          // +inf means the residual is at rounding level.
          {"residual_order", std::isinf(c.residual_order) ? Json("inf")
                                                          : json_number(c.residual_order)}};
}

inline Json to_json(const CheckOutcome& c) {
  return {{"family", c.family},
          {"value", json_number(c.value)},
          {"slack", std::isinf(c.slack) ? Json("inf") : json_number(c.slack)},
          {"tol", c.tol},
          {"pass", c.pass}};
}

inline Json to_json(const FidelityRecord& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  Json j = {{"index", r.index},     {"seed", r.seed},         {"label", r.label},
            {"beta", r.beta},       {"commuting", r.commuting}, {"passed", r.passed()},
            {"checks", std::move(checks)}};
  if (r.report) j["fidelity"] = to_json(*r.report);
  if (r.expansion) j["expansion"] = to_json(*r.expansion);
  if (r.error) j["error"] = *r.error;
  return j;
}

// ---------------------------------------------------------------------------
// CSV, one row per instance after a header row.

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace detail

inline void write_csv(std::ostream& os, const SuiteReport& r) {
  os << "index,seed,label,beta,checks,passed,worst_family,worst_params,worst_relative_slack,error\n";
  for (const auto& rec : r.instances) {
    const InequalityReport* worst = nullptr;
    for (const auto& c : rec.reports)
      if (worst == nullptr || c.relative_slack() < worst->relative_slack()) worst = &c;
    os << rec.index << ',' << rec.seed << ',' << detail::csv_field(rec.label) << ','
       << detail::csv_number(rec.beta) << ',' << rec.reports.size() << ','
       << (rec.passed() ? 1 : 0) << ',' << (worst ? to_string(worst->family) : "") << ','
       << detail::csv_field(worst ? format_params(worst->params) : "") << ','
       << (worst ? detail::csv_number(worst->relative_slack()) : "") << ','
       << detail::csv_field(rec.error.value_or("")) << '\n';
  }
}

inline void write_csv(std::ostream& os, const FidelityCampaignReport& r) {
  os << "index,seed,label,beta,commuting,passed,chi_spectral_form1,chi_spectral_form2,"
        "chi_fd_one_sided,chi_fd_two_sided,bound_lower,bound_upper,susceptibility_fd,"
        "trace_x,trace_y,residual_order,error\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& rec : r.instances) {
    const FidelityReport f = rec.report.value_or(FidelityReport{});
    const bool hf = rec.report.has_value();
    const bool he = rec.expansion.has_value();
    auto num = [](bool have, double v) { return have ? detail::csv_number(v) : std::string(); };
    os << rec.index << ',' << rec.seed << ',' << detail::csv_field(rec.label) << ','
       << detail::csv_number(rec.beta) << ',' << (rec.commuting ? 1 : 0) << ','
       << (rec.passed() ? 1 : 0) << ',' << num(hf, f.chi_spectral_form1) << ','
       << num(hf, f.chi_spectral_form2) << ',' << num(hf, f.chi_fd_one_sided) << ','
       << num(hf, f.chi_fd_two_sided) << ',' << num(hf, f.bound_lower) << ','
       << num(hf, f.bound_upper) << ',' << num(hf, f.susceptibility_fd) << ','
       << num(he, he ? rec.expansion->trace_x : nan) << ','
       << num(he, he ? rec.expansion->trace_y : nan) << ','
       << num(he, he ? rec.expansion->residual_order : nan) << ','
       << detail::csv_field(rec.error.value_or("")) << '\n';
  }
}

/// Writes `text` to `path`; "-" is standard output.
inline void write_text(const std::string& path, const std::string& text, std::ostream& stdout_) {
  if (path == "-") {
    stdout_ << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace gibbsineq

#endif  // GIBBSINEQ_REPORT_HPP
