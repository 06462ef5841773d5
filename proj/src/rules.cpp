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

#include "audit_util.hpp"
#include "sheetcheck/checks.hpp"

namespace sheetcheck {

namespace detail {

std::optional<FlaggedChain> flagged_chain(const AuditContext& ctx,
                                          const Cell& cell) {
  if (!cell.formula) return std::nullopt;
  auto chain = plus_chain(*cell.formula);
  if (!chain) return std::nullopt;
  FlaggedChain out;
  out.has_minus = chain->has_minus;
  std::set<CellAddress> cells;
  std::set<RangeRef> ranges;
  for (const NodePtr& leaf_node : chain->leaves) {
    const Node& leaf = unwrap(*leaf_node);
    ChainLeaf entry;
    if (auto a = resolve_ref(ctx.workbook, leaf)) {
      entry.cell = *a;
      cells.insert(*a);
    } else if (auto* call = leaf.as<ast::Call>();
               call && call->name == "SUM" && call->args.size() == 1) {
      auto r = resolve_static(ctx.workbook, *call->args[0]);
      if (!r) return std::nullopt;
      entry.inline_sum = *r;
      ranges.insert(*r);
    } else {
      return std::nullopt;
    }
    out.leaves.push_back(std::move(entry));
  }
  out.distinct = cells.size() + ranges.size();
  if (out.distinct < static_cast<std::size_t>(ctx.config.chain_plus_min)) {
    return std::nullopt;
  }
  return out;
}

namespace {

bool is_halving(const Node& n) {
  auto* b = unwrap(n).as<ast::Binary>();
  if (!b || b->op != BinaryOp::kDiv) return false;
  auto* two = unwrap(*b->rhs).as<ast::NumberLit>();
  return two && two->value == 2;
}

// Finds the first aggregate call in the formula whose range contains
// aggregates of its own sub-ranges. `halved` is true under a "/2".
void find_double_count(const AuditContext& ctx, const Cell& self,
                       const Node& n, bool halved, bool at_root,
                       std::optional<DoubleCount>& found) {
  if (found) return;
  if (auto* b = n.as<ast::Binary>()) {
    bool half = b->op == BinaryOp::kDiv && is_halving(n);
    find_double_count(ctx, self, *b->lhs, half, false, found);
    find_double_count(ctx, self, *b->rhs, false, false, found);
    return;
  }
  if (auto* p = n.as<ast::Paren>()) {
    return find_double_count(ctx, self, *p->child, halved, at_root, found);
  }
  if (auto* u = n.as<ast::Unary>()) {
    return find_double_count(ctx, self, *u->child, false, false, found);
  }
  auto* call = n.as<ast::Call>();
  if (!call) return;
  bool is_sum = call->name == "SUM";
  bool is_subtotal = call->name == "SUBTOTAL" && !call->args.empty() &&
                     call->args[0]->as<ast::NumberLit>() &&
                     call->args[0]->as<ast::NumberLit>()->value == 9;
  if ((is_sum && !halved) || is_subtotal) {
    for (std::size_t i = is_subtotal ? 1 : 0; i < call->args.size(); ++i) {
      auto range = resolve_static(ctx.workbook, *call->args[i]);
      if (!range || (range->rows() == 1 && range->cols() == 1)) continue;
      DoubleCount dc{call->name, *range, {}, at_root};
      for (const Cell* inner : present_cells(ctx.workbook, *range)) {
        if (inner->address == self.address) continue;
        auto agg = as_aggregate(ctx.workbook, *inner);
        if (!agg) continue;
        // SUBTOTAL already skips inner SUBTOTALs; only inner SUMs
        // double count under it.
        if (is_subtotal && agg->function == "SUBTOTAL") continue;
        bool nested = std::all_of(
            agg->ranges.begin(), agg->ranges.end(),
            [&](const RangeRef& r) { return range->contains(r); });
        if (nested) dc.inner.push_back(inner->address);
      }
      if (!dc.inner.empty()) {
        found = std::move(dc);
        return;
      }
    }
  }
  for (const NodePtr& arg : call->args) {
    find_double_count(ctx, self, *arg, false, false, found);
  }
}

}  // namespace

std::optional<DoubleCount> flagged_double_count(const AuditContext& ctx,
                                                const Cell& cell) {
  if (!cell.formula) return std::nullopt;
  std::optional<DoubleCount> found;
  find_double_count(ctx, cell, *cell.formula, false, true, found);
  return found;
}

std::vector<const Cell*> check_cells(const Workbook& wb) {
  std::vector<const Cell*> out;
  for (const Sheet& sheet : wb.sheets()) {
    for (const auto& [pos, cell] : sheet.cells()) {
      if (cell.formula && is_check_cell(*cell.formula)) out.push_back(&cell);
    }
  }
  return out;
}

bool table_has_check(const AuditContext& ctx, const TableRegion& table) {
  if (!table.has_both_totals()) return false;
  const std::string& sheet = table.bounds.start.sheet;
  RangeRef row_totals = make_rect(sheet, table.body.start.row, *table.totals_col,
                                  table.body.end.row, *table.totals_col);
  RangeRef col_totals = make_rect(sheet, *table.totals_row, table.body.start.col,
                                  *table.totals_row, table.body.end.col);
  for (const Cell* check : check_cells(ctx.workbook)) {
    auto closure = precedent_closure(ctx.graph, {check->address});
    bool rows = false;
    bool cols = false;
    for (const CellAddress& a : closure) {
      rows = rows || row_totals.contains(a);
      cols = cols || col_totals.contains(a);
    }
    if (rows && cols) return true;
  }
  return false;
}

}  // namespace detail

namespace {

using detail::make_rect;
using detail::present_cells;

// Sum of the numbers in a range, as SUM would see them.
double sum_numbers(const AuditContext& ctx, const RangeRef& r) {
  double total = 0;
  for (const Cell* cell : present_cells(ctx.workbook, r)) {
    const CellValue& v = ctx.values.at(cell->address);
    if (v.is_number()) total += v.as_number();
  }
  return total;
}

bool is_blank_marker(const CellValue& v) { return v.is_blank() || v.is_text(); }

bool is_number_lit(const Node& n, double want) {
  const Node& u = unwrap(n);
  if (auto* x = u.as<ast::NumberLit>()) return x->value == want;
  if (auto* neg = u.as<ast::Unary>(); neg && neg->op == UnaryOp::kNeg) {
    auto* x = unwrap(*neg->child).as<ast::NumberLit>();
    return x && -x->value == want;
  }
  return false;
}

// ROW()-1 / COLUMN()-1, or the same with the cell's own address.
bool is_position_minus_one(const AuditContext& ctx, const Node& n,
                           const CellAddress& self, const char* fn) {
  auto* b = unwrap(n).as<ast::Binary>();
  if (!b || b->op != BinaryOp::kSub || !is_number_lit(*b->rhs, 1)) return false;
  auto* call = unwrap(*b->lhs).as<ast::Call>();
  if (!call || call->name != fn) return false;
  if (call->args.empty()) return true;
  auto a = detail::resolve_ref(ctx.workbook, *call->args[0]);
  return call->args.size() == 1 && a && *a == self;
}

// Whether a dynamic range end is the "cell before me" idiom: OFFSET(self,-1,0)
// or INDEX(column, ROW()-1) going down, and their horizontal analogs.
std::optional<bool> anchored_end(const AuditContext& ctx, const Node& end,
                                 const CellAddress& self) {
  auto* call = unwrap(end).as<ast::Call>();
  if (!call) return std::nullopt;
  if (call->name == "OFFSET" && call->args.size() == 3) {
    auto a = detail::resolve_ref(ctx.workbook, *call->args[0]);
    if (!a || !(*a == self)) return std::nullopt;
    if (is_number_lit(*call->args[1], -1) && is_number_lit(*call->args[2], 0)) {
      return true;
    }
    if (is_number_lit(*call->args[1], 0) && is_number_lit(*call->args[2], -1)) {
      return false;
    }
    return std::nullopt;
  }
  if (call->name == "INDEX" && call->args.size() == 2) {
    auto* range = unwrap(*call->args[0]).as<ast::Range>();
    if (!range) return std::nullopt;
    auto r = static_range(*range);
    if (!r) return std::nullopt;
    auto sheet = ctx.workbook.canonical(r->start);
    if (!sheet || sheet->sheet != self.sheet) return std::nullopt;
    bool column = r->whole_column || r->start.col == r->end.col;
    if (column && r->start.col == self.col && r->start.row == 1 &&
        is_position_minus_one(ctx, *call->args[1], self, "ROW")) {
      return true;
    }
    if (r->start.row == r->end.row && r->start.row == self.row &&
        r->start.col == 1 &&
        is_position_minus_one(ctx, *call->args[1], self, "COLUMN")) {
      return false;
    }
  }
  return std::nullopt;
}

void insertion_findings(const AuditContext& ctx, const Cell& cell,
                        const Node& n, std::vector<Finding>& out) {
  auto* call = n.as<ast::Call>();
  if (call && (call->name == "SUM" || call->name == "SUBTOTAL")) {
    for (std::size_t i = call->name == "SUBTOTAL" ? 1 : 0;
         i < call->args.size(); ++i) {
      auto* range = unwrap(*call->args[i]).as<ast::Range>();
      if (!range || range->whole_column) continue;
      std::optional<CellAddress> first;
      std::optional<CellAddress> last;
      std::string shown;
      if (auto r = detail::resolve_static(ctx.workbook, *call->args[i])) {
        bool vertical = r->cols() == 1 && r->rows() >= 2;
        bool horizontal = r->rows() == 1 && r->cols() >= 2;
        if (!vertical && !horizontal) continue;
        first = r->start;
        last = r->end;
        shown = format_range(*r);
      } else {
        auto start = detail::resolve_ref(ctx.workbook, unwrap(*range->start));
        if (!start || !anchored_end(ctx, *range->end, cell.address)) continue;
        first = *start;
        shown = print_formula(std::make_shared<const Node>(Node{*range}));
        shown = shown.substr(1);
      }
      auto report = [&](const CellAddress& at, bool top) {
        if (is_blank_marker(ctx.values.at(at))) return;
        Finding f;
        f.rule = "R3";
        f.severity = Severity::kWarning;
        f.cells = {cell.address, at};
        f.message = "range " + shown + (top ? " begins" : " ends") +
                    " at non-blank " + format_address(at) + "; cells inserted " +
                    (top ? "before" : "after") + " it fall outside the total";
        out.push_back(std::move(f));
      };
      report(*first, true);
      if (last) report(*last, false);
    }
  }
  if (auto* b = n.as<ast::Binary>()) {
    insertion_findings(ctx, cell, *b->lhs, out);
    insertion_findings(ctx, cell, *b->rhs, out);
  } else if (auto* u = n.as<ast::Unary>()) {
    insertion_findings(ctx, cell, *u->child, out);
  } else if (auto* p = n.as<ast::Paren>()) {
    insertion_findings(ctx, cell, *p->child, out);
  } else if (call) {
    for (const NodePtr& arg : call->args) {
      insertion_findings(ctx, cell, *arg, out);
    }
  }
}

bool is_text_render(const Workbook& wb, const Node& operand) {
  auto a = detail::resolve_ref(wb, unwrap(operand));
  if (!a) return false;
  const Cell* target = wb.find_cell(*a);
  if (!target || !target->formula) return false;
  std::string root = root_call_name(target->formula);
  return root == "FIXED" || root == "DOLLAR";
}

void hazard_targets(const Workbook& wb, const Node& n,
                    std::set<CellAddress>& out) {
  auto consider = [&](const Node& operand) {
    if (is_text_render(wb, operand)) {
      out.insert(*detail::resolve_ref(wb, unwrap(operand)));
    }
  };
  if (auto* b = n.as<ast::Binary>()) {
    if (is_arithmetic(b->op)) {
      consider(*b->lhs);
      consider(*b->rhs);
    }
    hazard_targets(wb, *b->lhs, out);
    hazard_targets(wb, *b->rhs, out);
  } else if (auto* u = n.as<ast::Unary>()) {
    consider(*u->child);
    hazard_targets(wb, *u->child, out);
  } else if (auto* p = n.as<ast::Paren>()) {
    hazard_targets(wb, *p->child, out);
  } else if (auto* c = n.as<ast::Call>()) {
    for (const NodePtr& arg : c->args) hazard_targets(wb, *arg, out);
  }
}

std::string join_cells(const std::vector<CellAddress>& cells) {
  std::string out;
  for (const CellAddress& a : cells) {
    out += (out.empty() ? "" : ", ") + format_address(a);
  }
  return out;
}

// Shows the preferred rewrite and mentions the SUBTOTAL one when it is not
// the one shown.
void attach_rewrite(const AuditContext& ctx, const CellAddress& at,
                    Finding& f) {
  auto rw = suggest_total_rewrite(ctx, at);
  if (!rw) return;
  f.suggestion = rw->halved_sum   ? rw->halved_sum
                 : rw->subtotal   ? rw->subtotal
                                  : rw->plain_sum;
  if (!rw->subtotal) return;
  if (f.suggestion != rw->subtotal) {
    f.message += "; alternatively " + *rw->subtotal;
  }
  if (!rw->inner.empty()) {
    std::vector<CellAddress> inner;
    for (auto& [a, _] : rw->inner) inner.push_back(a);
    f.message += (f.suggestion == rw->subtotal ? "; rewrite " : " after rewriting ") +
                 join_cells(inner) + " as SUBTOTAL(9,...)";
  }
}

}  // namespace

std::vector<Finding> check_crossfoot(const AuditContext& ctx,
                                     const TableRegion& table) {
  std::vector<Finding> out;
  if (!table.has_both_totals() || !table.grand_total) return out;
  const std::string& sheet = table.bounds.start.sheet;
  const double tol = ctx.config.tolerance_abs;
  RangeRef row_totals = make_rect(sheet, table.body.start.row, *table.totals_col,
                                  table.body.end.row, *table.totals_col);
  RangeRef col_totals = make_rect(sheet, *table.totals_row, table.body.start.col,
                                  *table.totals_row, table.body.end.col);
  double across = sum_numbers(ctx, row_totals);
  double down = sum_numbers(ctx, col_totals);
  const int digits = check_rounding_digits(tol);
  double d1 = round_decimal(std::fabs(across - down), digits);
  const CellAddress& grand = *table.grand_total;

  // Fires exactly when the generated check formula would.
  if (!(d1 < tol)) {
    Finding f;
    f.rule = "R1";
    f.severity = Severity::kError;
    f.cells = {grand};
    f.message = "row totals " + format_range(row_totals) + " sum to " +
                format_general(across) + " but column totals " +
                format_range(col_totals) + " sum to " + format_general(down);
    f.measured = d1;
    f.threshold = tol;
    out.push_back(std::move(f));
  }
  const CellValue& g = ctx.values.at(grand);
  if (g.is_number()) {
    double d2 = round_decimal(
        std::fabs(sum_numbers(ctx, table.bounds) / 4 - g.as_number()), digits);
    if (!(d2 < tol)) {
      Finding f;
      f.rule = "R1";
      f.severity = Severity::kError;
      f.cells = {grand};
      f.message = "grand total " + format_address(grand) +
                  " differs from a quarter of the sum of " +
                  format_range(table.bounds);
      f.measured = d2;
      f.threshold = tol;
      out.push_back(std::move(f));
    }
  }
  if (!detail::table_has_check(ctx, table)) {
    Finding f;
    f.rule = "R1";
    f.severity = Severity::kInfo;
    f.cells = {grand};
    f.message = "missing check cell: nothing compares " +
                format_range(row_totals) + " with " + format_range(col_totals);
    f.suggestion = crossfoot_check_formula(ctx, table);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> detect_chained_plus(const AuditContext& ctx) {
  std::vector<Finding> out;
  for (const Sheet& sheet : ctx.workbook.sheets()) {
    for (const auto& [pos, cell] : sheet.cells()) {
      auto chain = detail::flagged_chain(ctx, cell);
      if (!chain) continue;
      Finding f;
      f.rule = "R2";
      f.severity = Severity::kWarning;
      f.cells = {cell.address};
      f.message = "total adds " + std::to_string(chain->distinct) +
                  " separately pointed terms";
      if (chain->has_minus) {
        f.message += "; it also subtracts, so no range rewrite is offered";
      } else {
        attach_rewrite(ctx, cell.address, f);
      }
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<Finding> detect_insertion_risk(const AuditContext& ctx) {
  std::vector<Finding> out;
  for (const Sheet& sheet : ctx.workbook.sheets()) {
    for (const auto& [pos, cell] : sheet.cells()) {
      if (cell.formula) insertion_findings(ctx, cell, *cell.formula, out);
    }
  }
  return out;
}

std::vector<Finding> detect_double_count(const AuditContext& ctx) {
  std::vector<Finding> out;
  for (const Sheet& sheet : ctx.workbook.sheets()) {
    for (const auto& [pos, cell] : sheet.cells()) {
      auto dc = detail::flagged_double_count(ctx, cell);
      if (!dc) continue;
      Finding f;
      f.rule = "R4";
      f.severity = Severity::kError;
      f.cells = {cell.address};
      f.cells.insert(f.cells.end(), dc->inner.begin(), dc->inner.end());
      f.message = dc->outer + " over " + format_range(dc->range) +
                  " also adds the subtotals in " + join_cells(dc->inner);
      attach_rewrite(ctx, cell.address, f);
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<Finding> check_indicator_propagation(const AuditContext& ctx) {
  std::vector<Finding> out;
  const Workbook& wb = ctx.workbook;
  auto checks = detail::check_cells(wb);
  if (checks.empty()) {
    Finding f;
    f.rule = "R5";
    f.severity = Severity::kInfo;
    f.message = "no self-checks found";
    out.push_back(std::move(f));
    return out;
  }
  const std::string& front = wb.front_sheet();
  std::vector<CellAddress> seeds;
  if (const Sheet* s = wb.find_sheet(front)) {
    for (const auto& [pos, cell] : s->cells()) {
      if (cell.formula) seeds.push_back(cell.address);
    }
  }
  auto reached = detail::precedent_closure(ctx.graph, seeds);
  for (const Sheet& sheet : wb.sheets()) {
    if (sheet.name() == front) continue;
    std::vector<CellAddress> own;
    for (const Cell* c : checks) {
      if (c->address.sheet == sheet.name()) own.push_back(c->address);
    }
    if (own.empty()) continue;
    bool carried = std::any_of(own.begin(), own.end(), [&](const CellAddress& a) {
      return reached.count(a) > 0;
    });
    if (carried) continue;
    Finding f;
    f.rule = "R5";
    f.severity = Severity::kWarning;
    f.cells = own;
    f.message = "front sheet '" + front + "' does not carry forward any check "
                "cell of sheet '" + sheet.name() + "'";
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Finding> detect_text_number_hazard(const AuditContext& ctx) {
  std::vector<Finding> out;
  for (const Sheet& sheet : ctx.workbook.sheets()) {
    for (const auto& [pos, cell] : sheet.cells()) {
      if (!cell.formula) continue;
      std::set<CellAddress> targets;
      hazard_targets(ctx.workbook, *cell.formula, targets);
      for (const CellAddress& t : targets) {
        Finding f;
        f.rule = "R6";
        f.severity = Severity::kWarning;
        f.cells = {cell.address, t};
        f.message = format_address(t, t.sheet != cell.address.sheet) +
                    " holds " + root_call_name(ctx.workbook.find_cell(t)->formula) +
                    " text, which SUM skips but arithmetic here turns back "
                    "into a number";
        out.push_back(std::move(f));
      }
    }
  }
  return out;
}

}  // namespace sheetcheck
