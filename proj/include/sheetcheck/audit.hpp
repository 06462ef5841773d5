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

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sheetcheck/recalc.hpp"
#include "sheetcheck/workbook.hpp"

namespace sheetcheck {

enum class Severity { kInfo, kWarning, kError };

std::string_view severity_text(Severity s);
std::optional<Severity> severity_from_text(std::string_view text);

// A rectangular block of numbers. Totals lines, when present, are the last
// row and last column of bounds; body is what remains.
struct TableRegion {
  RangeRef bounds;
  RangeRef body;
  std::optional<int> totals_row;
  std::optional<int> totals_col;
  std::optional<CellAddress> grand_total;

  bool has_both_totals() const { return totals_row && totals_col; }
};

struct Finding {
  std::string rule;  // R1..R8, or "internal"
  Severity severity = Severity::kWarning;
  std::vector<CellAddress> cells;
  std::string message;
  std::optional<double> measured;
  std::optional<double> threshold;
  std::optional<std::string> suggestion;
};

enum class AssertionKind { kEquality, kSumToConstant, kSign, kRange, kConvergence };

std::string_view assertion_kind_text(AssertionKind k);

enum class SignRule { kPositive, kNegative, kNonNegative, kNonPositive };

struct AssertionSpec {
  AssertionKind kind = AssertionKind::kEquality;
  std::string lhs;                  // cell or range text
  std::optional<std::string> rhs;   // cell or range text
  std::optional<double> constant;   // rhs constant
  double tolerance = 0.01;
  std::string label;
  SignRule sign = SignRule::kNonNegative;
  std::optional<double> min;
  std::optional<double> max;
  std::optional<int> checklist_item;
};

struct RatioBand {
  std::string numerator;
  std::string denominator;
  double reference_ratio = 0;
  double band_fraction = 0;
  std::string label;
};

inline constexpr const char* kDefaultCheckMessage =
    "Totals across and down do not match";

struct AuditConfig {
  double tolerance_abs = 0.01;
  int chain_plus_min = 4;
  double totals_line_fraction = 0.8;
  std::vector<AssertionSpec> assertions;
  std::vector<RatioBand> ratio_bands;
  std::set<std::string> enabled_rules = {"R1", "R2", "R3", "R4",
                                         "R5", "R6", "R7", "R8"};
  std::map<std::string, Severity> severity_overrides;
  std::string check_message = kDefaultCheckMessage;

  bool enabled(std::string_view rule) const {
    return enabled_rules.count(std::string(rule)) > 0;
  }
};

// Parses the JSON config; missing fields keep their defaults. Throws
// ConfigError on malformed JSON, unknown keys or out-of-range values.
AuditConfig parse_audit_config(std::string_view json_text);
std::string audit_config_to_json(const AuditConfig& config);

// Everything a rule may read. All members outlive the rule call.
struct AuditContext {
  const Workbook& workbook;
  const DepGraph& graph;
  const ValueMap& values;
  const AuditConfig& config;
};

std::vector<TableRegion> detect_tables(const AuditContext& ctx,
                                       const Sheet& sheet);

// IF(cmp, "", msg) or IF(cmp, msg, ""), where cmp is a comparison.
bool is_check_cell(const Node& formula);

// Whether SUM(enclosing)/2 equals the sum of the plain numbers in it: the
// aggregate cells inside (SUM/SUBTOTAL over one static range) have pairwise
// disjoint ranges that stay inside enclosing, no aggregate sits inside
// another's range, and every other number is covered by exactly one range.
bool tiling_holds(const AuditContext& ctx, const RangeRef& enclosing);

std::vector<Finding> check_crossfoot(const AuditContext& ctx,
                                     const TableRegion& table);
std::vector<Finding> detect_chained_plus(const AuditContext& ctx);
std::vector<Finding> detect_insertion_risk(const AuditContext& ctx);
std::vector<Finding> detect_double_count(const AuditContext& ctx);
std::vector<Finding> check_indicator_propagation(const AuditContext& ctx);
std::vector<Finding> detect_text_number_hazard(const AuditContext& ctx);
// R7 for assertions, R8 for ratio bands.
std::vector<Finding> check_assertions(const AuditContext& ctx);

struct SeverityCounts {
  std::size_t error = 0;
  std::size_t warning = 0;
  std::size_t info = 0;
};

struct AuditReport {
  std::string tool;
  std::string version;
  AuditConfig config;
  std::vector<Finding> findings;

  SeverityCounts counts() const;
  std::string to_json() const;
  std::string to_text() const;
};

extern const char* const kReportFooter;

AuditReport run_audit(const Workbook& wb, const AuditConfig& config);

}  // namespace sheetcheck
