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

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sheetcheck/audit.hpp"

namespace sheetcheck {

struct CheckPatch {
  CellAddress target;
  std::string formula;
  std::string rule;
  std::optional<RangeRef> table;
};

// Decimal places a cross-foot difference is rounded to before it is compared
// with the tolerance: six more than the tolerance itself needs. Without it a
// difference of exactly the tolerance can land either side of it.
int check_rounding_digits(double tolerance);

// The cross-foot check formula for a table with both totals lines. Where
// cells already sum the row-totals column and the totals row, the formula
// compares those cells; otherwise it sums the two spans inline.
std::string crossfoot_check_formula(const AuditContext& ctx,
                                    const TableRegion& table);

// Places the check in the first blank cell among the three below the grand
// total, then the three to its right. `taken` holds targets already claimed
// by other patches. Throws GenerationError.
CheckPatch generate_crossfoot_check(const AuditContext& ctx,
                                    const TableRegion& table,
                                    const std::set<CellAddress>& taken = {});

// One patch per table (with both totals lines) that no check cell covers.
std::vector<CheckPatch> generate_checks(const AuditContext& ctx);

// Rewrites for a total flagged by R2 (plus chain) or R4 (double count).
struct TotalRewrite {
  CellAddress cell;
  RangeRef enclosing;
  std::optional<std::string> plain_sum;   // =SUM(E), raw inputs
  std::optional<std::string> halved_sum;  // =SUM(E)/2, tiling layouts
  std::optional<std::string> subtotal;    // =SUBTOTAL(9,E)
  // SUM -> SUBTOTAL(9,...) for the aggregates inside E.
  std::vector<std::pair<CellAddress, std::string>> inner;
};

// nullopt when the cell is neither an R2 chain nor an R4 double count, or
// when no rewrite keeps the total's value.
std::optional<TotalRewrite> suggest_total_rewrite(const AuditContext& ctx,
                                                  const CellAddress& cell);

// New workbook with the patch formulas added. All targets must be blank and
// all formulas must parse; otherwise ApplyError lists every offending patch
// and nothing is applied.
Workbook apply_patches(const Workbook& wb,
                       const std::vector<CheckPatch>& patches);

std::string patches_to_json(const std::vector<CheckPatch>& patches);
std::vector<CheckPatch> patches_from_json(std::string_view json_text,
                                          const Workbook& wb);

}  // namespace sheetcheck
