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
#include <vector>

#include "sheetcheck/audit.hpp"

namespace sheetcheck::detail {

// A cell whose formula is SUM(...) or SUBTOTAL(9, ...) over static
// references on its own sheet.
struct Aggregate {
  std::string function;
  std::vector<RangeRef> ranges;
};

std::optional<Aggregate> as_aggregate(const Workbook& wb, const Cell& cell);

// Leaves of a +/- tree, looking through parentheses. nullopt unless the
// root is a binary + or -.
struct PlusChain {
  std::vector<NodePtr> leaves;
  bool has_minus = false;
};

std::optional<PlusChain> plus_chain(const Node& root);

// Cells reachable through value edges from the seeds, seeds included.
std::set<CellAddress> precedent_closure(const DepGraph& graph,
                                        const std::vector<CellAddress>& seeds);

bool is_number_at(const AuditContext& ctx, const CellAddress& a);

// Existing cells of a same-sheet range, row-major.
std::vector<const Cell*> present_cells(const Workbook& wb,
                                       const RangeRef& range);

RangeRef make_rect(const std::string& sheet, int top, int left, int bottom,
                   int right);

bool overlaps(const RangeRef& a, const RangeRef& b);

// Canonical (sheet-resolved) address of a Ref node, if it names a sheet
// that exists.
std::optional<CellAddress> resolve_ref(const Workbook& wb, const Node& node);

// Static range of a Range node or single-cell range of a Ref node, with the
// sheet resolved.
std::optional<RangeRef> resolve_static(const Workbook& wb, const Node& node);

// A flagged +/- chain (R2). Leaves are cell references or inline SUMs over
// one static range.
struct ChainLeaf {
  std::optional<CellAddress> cell;
  std::optional<RangeRef> inline_sum;
};

struct FlaggedChain {
  std::vector<ChainLeaf> leaves;
  bool has_minus = false;
  std::size_t distinct = 0;
};

std::optional<FlaggedChain> flagged_chain(const AuditContext& ctx,
                                          const Cell& cell);

// A SUM (or SUBTOTAL) whose range holds aggregates of its own sub-ranges
// (R4). `whole_formula` is set when the aggregate is the formula's root.
struct DoubleCount {
  std::string outer;
  RangeRef range;
  std::vector<CellAddress> inner;
  bool whole_formula = false;
};

std::optional<DoubleCount> flagged_double_count(const AuditContext& ctx,
                                                const Cell& cell);

// All check cells of the workbook, in sheet order.
std::vector<const Cell*> check_cells(const Workbook& wb);

// Whether some check cell reads (transitively) both a row total and a
// column total of the table, grand total aside.
bool table_has_check(const AuditContext& ctx, const TableRegion& table);

}  // namespace sheetcheck::detail
