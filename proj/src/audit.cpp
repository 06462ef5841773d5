// Copyright 2026 The Sheetcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "sheetcheck/audit.hpp"
#include "sheetcheck/error.hpp"

namespace sheetcheck {

using nlohmann::json;

const char* const kReportFooter =
    "Findings cover only the rules and assertions configured for this run; "
    "a clean report does not by itself show that the results are correct.";

std::string_view severity_text(Severity s) {
  switch (s) {
    case Severity::kInfo: return "info";
    case Severity::kWarning: return "warning";
    case Severity::kError: return "error";
  }
  return "";
}

std::optional<Severity> severity_from_text(std::string_view text) {
  if (text == "info") return Severity::kInfo;
  if (text == "warning") return Severity::kWarning;
  if (text == "error") return Severity::kError;
  return std::nullopt;
}

std::string_view assertion_kind_text(AssertionKind k) {
  switch (k) {
    case AssertionKind::kEquality: return "equality";
    case AssertionKind::kSumToConstant: return "sum_to_constant";
    case AssertionKind::kSign: return "sign";
    case AssertionKind::kRange: return "range";
    case AssertionKind::kConvergence: return "convergence";
  }
  return "";
}

namespace {

const std::set<std::string> kRuleIds = {"R1", "R2", "R3", "R4",
                                        "R5", "R6", "R7", "R8"};

std::optional<AssertionKind> kind_from_text(std::string_view t) {
  for (auto k : {AssertionKind::kEquality, AssertionKind::kSumToConstant,
                 AssertionKind::kSign, AssertionKind::kRange,
                 AssertionKind::kConvergence}) {
    if (assertion_kind_text(k) == t) return k;
  }
  return std::nullopt;
}

std::string_view sign_rule_text(SignRule s) {
  switch (s) {
    case SignRule::kPositive: return "positive";
    case SignRule::kNegative: return "negative";
    case SignRule::kNonNegative: return "nonnegative";
    case SignRule::kNonPositive: return "nonpositive";
  }
  return "";
}

std::optional<SignRule> sign_rule_from_text(std::string_view t) {
  for (auto s : {SignRule::kPositive, SignRule::kNegative,
                 SignRule::kNonNegative, SignRule::kNonPositive}) {
    if (sign_rule_text(s) == t) return s;
  }
  return std::nullopt;
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

double number_field(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + "." + key + " must be finite");
  return d;
}

std::string string_field(const json& obj, const char* key,
                         const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

// checklist item -> default assertion kind. Items without a formula template
// are rejected.
AssertionKind kind_for_checklist(int item, const json& obj, const std::string& where) {
  switch (item) {
    case 1: case 2: case 4: case 5: case 6: case 7: case 11:
      return AssertionKind::kEquality;
    case 3: case 13:
      return obj.contains("min") || obj.contains("max") ? AssertionKind::kRange
                                                        : AssertionKind::kSign;
    case 12:
      return AssertionKind::kConvergence;
    case 8: case 9: case 10: case 14:
      throw ConfigError(where + ": checklist item " + std::to_string(item) +
                        " has no assertion template");
    default:
      throw ConfigError(where + ": unknown checklist item " + std::to_string(item));
  }
}

AssertionSpec parse_assertion(const json& obj, const std::string& where,
                              double default_tol) {
  check_keys(obj, {"kind", "lhs", "rhs", "constant", "tolerance", "label",
                   "sign", "min", "max", "checklist_item"},
             where);
  AssertionSpec a;
  a.tolerance = default_tol;
  std::optional<AssertionKind> from_item;
  if (obj.contains("checklist_item")) {
    if (!obj["checklist_item"].is_number_integer()) {
      throw ConfigError(where + ".checklist_item must be an integer");
    }
    a.checklist_item = obj["checklist_item"].get<int>();
    from_item = kind_for_checklist(*a.checklist_item, obj, where);
  }
  if (obj.contains("kind")) {
    auto k = kind_from_text(string_field(obj, "kind", where));
    if (!k) throw ConfigError(where + ".kind is not a known assertion kind");
    if (from_item && *from_item != *k &&
        !(a.checklist_item == 3 || a.checklist_item == 13)) {
      throw ConfigError(where + ".kind contradicts its checklist_item");
    }
    a.kind = *k;
  } else if (from_item) {
    a.kind = *from_item;
  } else {
    throw ConfigError(where + " needs a kind or a checklist_item");
  }
  if (!obj.contains("lhs")) throw ConfigError(where + " needs lhs");
  a.lhs = string_field(obj, "lhs", where);
  if (obj.contains("rhs")) a.rhs = string_field(obj, "rhs", where);
  if (obj.contains("constant")) a.constant = number_field(obj, "constant", where);
  if (obj.contains("tolerance")) a.tolerance = number_field(obj, "tolerance", where);
  if (obj.contains("label")) a.label = string_field(obj, "label", where);
  if (obj.contains("min")) a.min = number_field(obj, "min", where);
  if (obj.contains("max")) a.max = number_field(obj, "max", where);
  if (obj.contains("sign")) {
    auto s = sign_rule_from_text(string_field(obj, "sign", where));
    if (!s) throw ConfigError(where + ".sign must be positive, negative, "
                              "nonnegative or nonpositive");
    a.sign = *s;
  }
  if (a.tolerance < 0) throw ConfigError(where + ".tolerance must be >= 0");
  if (a.checklist_item == 6 && !a.rhs && !a.constant) a.constant = 0.0;
  switch (a.kind) {
    case AssertionKind::kEquality:
      if (!a.rhs && !a.constant) {
        throw ConfigError(where + ": equality needs rhs or constant");
      }
      break;
    case AssertionKind::kConvergence:
      if (!a.rhs) throw ConfigError(where + ": convergence needs rhs");
      break;
    case AssertionKind::kSumToConstant:
      if (!a.constant) throw ConfigError(where + ": sum_to_constant needs constant");
      break;
    case AssertionKind::kRange:
      if (!a.min && !a.max) throw ConfigError(where + ": range needs min or max");
      if (a.min && a.max && *a.min > *a.max) {
        throw ConfigError(where + ": min exceeds max");
      }
      break;
    case AssertionKind::kSign:
      break;
  }
  return a;
}

RatioBand parse_band(const json& obj, const std::string& where) {
  check_keys(obj, {"numerator", "denominator", "reference_ratio",
                   "band_fraction", "label"},
             where);
  for (const char* key : {"numerator", "denominator", "reference_ratio",
                          "band_fraction"}) {
    if (!obj.contains(key)) throw ConfigError(where + " needs " + key);
  }
  RatioBand b;
  b.numerator = string_field(obj, "numerator", where);
  b.denominator = string_field(obj, "denominator", where);
  b.reference_ratio = number_field(obj, "reference_ratio", where);
  b.band_fraction = number_field(obj, "band_fraction", where);
  if (obj.contains("label")) b.label = string_field(obj, "label", where);
  if (!(b.band_fraction > 0 && b.band_fraction <= 1)) {
    throw ConfigError(where + ".band_fraction must be in (0, 1]");
  }
  return b;
}

json config_json(const AuditConfig& c) {
  json j;
  j["tolerance_abs"] = c.tolerance_abs;
  j["chain_plus_min"] = c.chain_plus_min;
  j["totals_line_fraction"] = c.totals_line_fraction;
  j["check_message"] = c.check_message;
  j["enabled_rules"] = json(std::vector<std::string>(c.enabled_rules.begin(),
                                                     c.enabled_rules.end()));
  json overrides = json::object();
  for (auto& [rule, sev] : c.severity_overrides) {
    overrides[rule] = std::string(severity_text(sev));
  }
  j["severity_overrides"] = overrides;
  json assertions = json::array();
  for (const AssertionSpec& a : c.assertions) {
    json x;
    x["kind"] = std::string(assertion_kind_text(a.kind));
    x["lhs"] = a.lhs;
    if (a.rhs) x["rhs"] = *a.rhs;
    if (a.constant) x["constant"] = *a.constant;
    x["tolerance"] = a.tolerance;
    x["label"] = a.label;
    if (a.kind == AssertionKind::kSign) x["sign"] = std::string(sign_rule_text(a.sign));
    if (a.min) x["min"] = *a.min;
    if (a.max) x["max"] = *a.max;
    if (a.checklist_item) x["checklist_item"] = *a.checklist_item;
    assertions.push_back(std::move(x));
  }
  j["assertions"] = assertions;
  json bands = json::array();
  for (const RatioBand& b : c.ratio_bands) {
    bands.push_back({{"numerator", b.numerator},
                     {"denominator", b.denominator},
                     {"reference_ratio", b.reference_ratio},
                     {"band_fraction", b.band_fraction},
                     {"label", b.label}});
  }
  j["ratio_bands"] = bands;
  return j;
}

std::string cell_text(const CellAddress& a) { return format_address(a, true); }

}  // namespace

AuditConfig parse_audit_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  check_keys(doc, {"tolerance_abs", "chain_plus_min", "totals_line_fraction",
                   "assertions", "ratio_bands", "enabled_rules",
                   "severity_overrides", "check_message"},
             "config");
  AuditConfig c;
  if (doc.contains("tolerance_abs")) {
    c.tolerance_abs = number_field(doc, "tolerance_abs", "config");
    if (c.tolerance_abs < 0) throw ConfigError("config.tolerance_abs must be >= 0");
  }
  if (doc.contains("chain_plus_min")) {
    if (!doc["chain_plus_min"].is_number_integer() ||
        doc["chain_plus_min"].get<int>() < 2) {
      throw ConfigError("config.chain_plus_min must be an integer >= 2");
    }
    c.chain_plus_min = doc["chain_plus_min"].get<int>();
  }
  if (doc.contains("totals_line_fraction")) {
    c.totals_line_fraction = number_field(doc, "totals_line_fraction", "config");
    if (!(c.totals_line_fraction > 0 && c.totals_line_fraction <= 1)) {
      throw ConfigError("config.totals_line_fraction must be in (0, 1]");
    }
  }
  if (doc.contains("check_message")) {
    c.check_message = string_field(doc, "check_message", "config");
  }
  if (doc.contains("enabled_rules")) {
    if (!doc["enabled_rules"].is_array()) {
      throw ConfigError("config.enabled_rules must be a list");
    }
    c.enabled_rules.clear();
    for (const json& r : doc["enabled_rules"]) {
      if (!r.is_string() || !kRuleIds.count(r.get<std::string>())) {
        throw ConfigError("config.enabled_rules holds an unknown rule id");
      }
      c.enabled_rules.insert(r.get<std::string>());
    }
  }
  if (doc.contains("severity_overrides")) {
    const json& o = doc["severity_overrides"];
    if (!o.is_object()) throw ConfigError("config.severity_overrides must be an object");
    for (auto it = o.begin(); it != o.end(); ++it) {
      if (!kRuleIds.count(it.key())) {
        throw ConfigError("config.severity_overrides: unknown rule '" + it.key() + "'");
      }
      auto s = it.value().is_string()
                   ? severity_from_text(it.value().get<std::string>())
                   : std::nullopt;
      if (!s) throw ConfigError("config.severity_overrides." + it.key() +
                                " must be error, warning or info");
      c.severity_overrides[it.key()] = *s;
    }
  }
  if (doc.contains("assertions")) {
    if (!doc["assertions"].is_array()) throw ConfigError("config.assertions must be a list");
    std::size_t i = 0;
    for (const json& a : doc["assertions"]) {
      c.assertions.push_back(parse_assertion(
          a, "assertions[" + std::to_string(i++) + "]", c.tolerance_abs));
    }
  }
  if (doc.contains("ratio_bands")) {
    if (!doc["ratio_bands"].is_array()) throw ConfigError("config.ratio_bands must be a list");
    std::size_t i = 0;
    for (const json& b : doc["ratio_bands"]) {
      c.ratio_bands.push_back(parse_band(b, "ratio_bands[" + std::to_string(i++) + "]"));
    }
  }
  return c;
}

std::string audit_config_to_json(const AuditConfig& config) {
  return config_json(config).dump(2);
}

SeverityCounts AuditReport::counts() const {
  SeverityCounts c;
  for (const Finding& f : findings) {
    switch (f.severity) {
      case Severity::kError: ++c.error; break;
      case Severity::kWarning: ++c.warning; break;
      case Severity::kInfo: ++c.info; break;
    }
  }
  return c;
}

std::string AuditReport::to_json() const {
  json j;
  j["tool"] = tool;
  j["version"] = version;
  j["config"] = config_json(config);
  json list = json::array();
  for (const Finding& f : findings) {
    json x;
    x["rule"] = f.rule;
    x["severity"] = std::string(severity_text(f.severity));
    x["sheet"] = f.cells.empty() ? json(nullptr) : json(f.cells.front().sheet);
    json cells = json::array();
    for (const CellAddress& a : f.cells) cells.push_back(cell_text(a));
    x["cells"] = cells;
    x["message"] = f.message;
    if (f.measured) x["measured"] = *f.measured;
    if (f.threshold) x["threshold"] = *f.threshold;
    if (f.suggestion) x["suggestion"] = *f.suggestion;
    list.push_back(std::move(x));
  }
  j["findings"] = list;
  SeverityCounts c = counts();
  j["counts"] = {{"error", c.error}, {"warning", c.warning}, {"info", c.info}};
  j["footer"] = kReportFooter;
  return j.dump(2) + "\n";
}

std::string AuditReport::to_text() const {
  std::ostringstream out;
  for (const Finding& f : findings) {
    out << f.rule << ' ' << severity_text(f.severity);
    if (!f.cells.empty()) out << ' ' << cell_text(f.cells.front());
    out << ": " << f.message;
    if (f.measured && f.threshold) {
      out << " (measured " << format_general(*f.measured) << ", threshold "
          << format_general(*f.threshold) << ')';
    }
    out << '\n';
    if (f.suggestion) out << "    suggestion: " << *f.suggestion << '\n';
  }
  SeverityCounts c = counts();
  out << c.error << " error(s), " << c.warning << " warning(s), " << c.info
      << " info\n"
      << kReportFooter << '\n';
  return out.str();
}

AuditReport run_audit(const Workbook& wb, const AuditConfig& config) {
  DepGraph graph = build_graph(wb);
  ValueMap values = recalculate(wb, graph);
  AuditContext ctx{wb, graph, values, config};

  AuditReport report;
  report.tool = "sheetcheck";
  report.version = SHEETCHECK_VERSION;
  report.config = config;

  auto run = [&](const std::string& rule,
                 const std::function<std::vector<Finding>()>& fn) {
    if (rule != "R7/R8" && !config.enabled(rule)) return;
    try {
      auto found = fn();
      report.findings.insert(report.findings.end(), found.begin(), found.end());
    } catch (const std::exception& e) {
      Finding f;
      f.rule = "internal";
      f.severity = Severity::kError;
      f.message = "rule " + rule + " failed: " + e.what();
      report.findings.push_back(std::move(f));
    }
  };
  run("R1", [&] {
    std::vector<Finding> out;
    for (const Sheet& sheet : wb.sheets()) {
      for (const TableRegion& t : detect_tables(ctx, sheet)) {
        auto found = check_crossfoot(ctx, t);
        out.insert(out.end(), found.begin(), found.end());
      }
    }
    return out;
  });
  run("R2", [&] { return detect_chained_plus(ctx); });
  run("R3", [&] { return detect_insertion_risk(ctx); });
  run("R4", [&] { return detect_double_count(ctx); });
  run("R5", [&] { return check_indicator_propagation(ctx); });
  run("R6", [&] { return detect_text_number_hazard(ctx); });
  run("R7/R8", [&] { return check_assertions(ctx); });

  for (Finding& f : report.findings) {
    auto it = config.severity_overrides.find(f.rule);
    if (it != config.severity_overrides.end()) f.severity = it->second;
  }
  auto key = [&](const Finding& f) {
    long sheet = -1;
    int row = 0;
    int col = 0;
    if (!f.cells.empty()) {
      sheet = static_cast<long>(wb.sheet_index(f.cells.front().sheet).value_or(0));
      row = f.cells.front().row;
      col = f.cells.front().col;
    }
    return std::make_tuple(sheet, row, col, f.rule, f.message);
  };
  std::stable_sort(report.findings.begin(), report.findings.end(),
                   [&](const Finding& a, const Finding& b) {
                     return key(a) < key(b);
                   });
  return report;
}

}  // namespace sheetcheck
