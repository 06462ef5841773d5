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
#include <deque>
#include <functional>
#include <map>

#include "audit_util.hpp"

namespace sheetcheck {

namespace detail {

std::optional<CellAddress> resolve_ref(const Workbook& wb, const Node& node) {
  auto* r = node.as<ast::Ref>();
  if (!r) return std::nullopt;
  auto a = wb.canonical(r->address);
  if (!a) return std::nullopt;
  a->col_absolute = a->row_absolute = false;
  return a;
}

std::optional<RangeRef> resolve_static(const Workbook& wb, const Node& node) {
  if (auto a = resolve_ref(wb, node)) return RangeRef{*a, *a, false};
  auto* range = node.as<ast::Range>();
  if (!range) return std::nullopt;
  auto r = static_range(*range);
  if (!r || !iequals(r->start.sheet, r->end.sheet)) return std::nullopt;
  auto s = wb.canonical(r->start);
  if (!s) return std::nullopt;
  r->start.sheet = r->end.sheet = s->sheet;
  r->start.col_absolute = r->start.row_absolute = false;
  r->end.col_absolute = r->end.row_absolute = false;
  if (r->whole_column) *r = clip_to_used(wb, *r);
  return r;
}

std::optional<Aggregate> as_aggregate(const Workbook& wb, const Cell& cell) {
  if (!cell.formula) return std::nullopt;
  auto* call = unwrap(*cell.formula).as<ast::Call>();
  if (!call || (call->name != "SUM" && call->name != "SUBTOTAL")) {
    return std::nullopt;
  }
  std::size_t first = 0;
  if (call->name == "SUBTOTAL") {
    if (call->args.empty()) return std::nullopt;
    auto* code = call->args[0]->as<ast::NumberLit>();
    if (!code || code->value != 9) return std::nullopt;
    first = 1;
  }
  Aggregate out{call->name, {}};
  for (std::size_t i = first; i < call->args.size(); ++i) {
    auto r = resolve_static(wb, *call->args[i]);
    if (!r || r->start.sheet != cell.address.sheet) return std::nullopt;
    out.ranges.push_back(*r);
  }
  if (out.ranges.empty()) return std::nullopt;
  return out;
}

namespace {

void collect_chain(const NodePtr& node, PlusChain& out) {
  const Node& n = unwrap(*node);
  if (auto* b = n.as<ast::Binary>()) {
    if (b->op == BinaryOp::kAdd || b->op == BinaryOp::kSub) {
      if (b->op == BinaryOp::kSub) out.has_minus = true;
      collect_chain(b->lhs, out);
      collect_chain(b->rhs, out);
      return;
    }
  }
  out.leaves.push_back(node);
}

}  // namespace

std::optional<PlusChain> plus_chain(const Node& root) {
  const Node& n = unwrap(root);
  auto* b = n.as<ast::Binary>();
  if (!b || (b->op != BinaryOp::kAdd && b->op != BinaryOp::kSub)) {
    return std::nullopt;
  }
  PlusChain out;
  if (b->op == BinaryOp::kSub) out.has_minus = true;
  collect_chain(b->lhs, out);
  collect_chain(b->rhs, out);
  return out;
}

std::set<CellAddress> precedent_closure(
    const DepGraph& graph, const std::vector<CellAddress>& seeds) {
  std::set<CellAddress> seen(seeds.begin(), seeds.end());
  std::deque<CellAddress> queue(seeds.begin(), seeds.end());
  while (!queue.empty()) {
    CellAddress a = queue.front();
    queue.pop_front();
    auto it = graph.edges.find(a);
    if (it == graph.edges.end()) continue;
    for (const CellAddress& p : it->second) {
      if (seen.insert(p).second) queue.push_back(p);
    }
  }
  return seen;
}

bool is_number_at(const AuditContext& ctx, const CellAddress& a) {
  return ctx.values.at(a).is_number();
}

std::vector<const Cell*> present_cells(const Workbook& wb,
                                       const RangeRef& range) {
  std::vector<const Cell*> out;
  const Sheet* sheet = wb.find_sheet(range.start.sheet);
  if (!sheet || range.end.row < range.start.row) return out;
  auto it = sheet->cells().lower_bound(GridPos{range.start.row, range.start.col});
  auto end = sheet->cells().upper_bound(GridPos{range.end.row, range.end.col});
  for (; it != end; ++it) {
    if (it->first.col < range.start.col || it->first.col > range.end.col) {
      continue;
    }
    out.push_back(&it->second);
  }
  return out;
}

RangeRef make_rect(const std::string& sheet, int top, int left, int bottom,
                   int right) {
  return RangeRef{CellAddress{sheet, left, top}, CellAddress{sheet, right, bottom},
                  false};
}

bool overlaps(const RangeRef& a, const RangeRef& b) {
  return a.start.sheet == b.start.sheet && a.start.row <= b.end.row &&
         b.start.row <= a.end.row && a.start.col <= b.end.col &&
         b.start.col <= a.end.col;
}

}  // namespace detail

namespace {

using detail::as_aggregate;
using detail::make_rect;

bool is_comparison_node(const Node& n) {
  auto* b = unwrap(n).as<ast::Binary>();
  return b && is_comparison(b->op);
}

bool is_text(const Node& n, bool want_empty) {
  auto* t = unwrap(n).as<ast::TextLit>();
  return t && t->value.empty() == want_empty;
}

enum class Direction { kDown, kAcross };

// Whether cell aggregates the cells before it along its column (kDown) or
// its row (kAcross), starting no later than `limit`. Sets `first` to where
// the aggregated span starts.
bool aggregates_along(const Workbook& wb, const Cell& cell, Direction dir,
                      int limit, int& first) {
  const CellAddress& at = cell.address;
  auto fits = [&](const CellAddress& s, const CellAddress& e) {
    if (dir == Direction::kDown) {
      return s.col == at.col && e.col == at.col && e.row < at.row &&
             s.row <= limit;
    }
    return s.row == at.row && e.row == at.row && e.col < at.col &&
           s.col <= limit;
  };
  if (auto agg = as_aggregate(wb, cell)) {
    if (agg->ranges.size() != 1) return false;
    const RangeRef& r = agg->ranges.front();
    if (!fits(r.start, r.end)) return false;
    first = dir == Direction::kDown ? r.start.row : r.start.col;
    return true;
  }
  auto chain = cell.formula ? detail::plus_chain(*cell.formula) : std::nullopt;
  if (!chain || chain->has_minus) return false;
  int lo = dir == Direction::kDown ? at.row : at.col;
  for (const NodePtr& leaf : chain->leaves) {
    auto a = detail::resolve_ref(wb, unwrap(*leaf));
    if (!a || a->sheet != at.sheet || !fits(*a, *a)) return false;
    lo = std::min(lo, dir == Direction::kDown ? a->row : a->col);
  }
  first = lo;
  return true;
}

struct LineVerdict {
  bool totals = false;
  std::optional<int> body_start;  // from the aggregates' spans
};

// Classifies the last row (dir kDown: its cells sum columns) or last column
// (kAcross) of box. The corner cell is judged separately: a line of typed
// numbers still counts as totals when the corner sums the other totals line.
LineVerdict classify_line(const AuditContext& ctx, const Sheet& sheet,
                          const RangeRef& box, Direction dir) {
  const Workbook& wb = ctx.workbook;
  bool down = dir == Direction::kDown;
  int fixed = down ? box.end.row : box.end.col;
  int from = down ? box.start.col : box.start.row;
  int to = down ? box.end.col : box.end.row;  // `to` is the corner
  int limit = down ? box.end.row - 1 : box.end.col - 1;

  int formulas = 0;
  int aggregating = 0;
  std::optional<int> body_start;
  for (int k = from; k < to; ++k) {
    const Cell* cell = down ? sheet.find(fixed, k) : sheet.find(k, fixed);
    if (!cell || !cell->formula) continue;
    ++formulas;
    int first = 0;
    if (aggregates_along(wb, *cell, dir, limit, first)) {
      ++aggregating;
      body_start = std::min(body_start.value_or(first), first);
    }
  }
  LineVerdict out;
  if (formulas > 0) {
    out.totals = aggregating >= ctx.config.totals_line_fraction * formulas;
    if (out.totals) out.body_start = body_start;
    return out;
  }
  // Typed totals: the corner must sum the perpendicular totals line (so it
  // runs in the same direction as this line's totals would). That is what
  // tells a grand total apart from the last row's own row total.
  const Cell* corner = down ? sheet.find(fixed, to) : sheet.find(to, fixed);
  int first = 0;
  out.totals = corner && corner->formula &&
               aggregates_along(wb, *corner, dir, limit, first);
  return out;
}

}  // namespace

bool is_check_cell(const Node& formula) {
  auto* call = unwrap(formula).as<ast::Call>();
  if (!call || call->name != "IF" || call->args.size() != 3) return false;
  if (!is_comparison_node(*call->args[0])) return false;
  const Node& a = *call->args[1];
  const Node& b = *call->args[2];
  return (is_text(a, true) && !is_text(b, true)) ||
         (is_text(b, true) && !is_text(a, true));
}

std::vector<TableRegion> detect_tables(const AuditContext& ctx,
                                       const Sheet& sheet) {
  const std::string& name = sheet.name();
  std::set<GridPos> numeric;
  for (const auto& [pos, cell] : sheet.cells()) {
    if (ctx.values.at(cell.address).is_number()) numeric.insert(pos);
  }

  // 8-connected components of numeric cells.
  std::vector<std::vector<GridPos>> components;
  std::set<GridPos> seen;
  for (const GridPos& start : numeric) {
    if (seen.count(start)) continue;
    std::vector<GridPos> comp;
    std::deque<GridPos> queue{start};
    seen.insert(start);
    while (!queue.empty()) {
      GridPos p = queue.front();
      queue.pop_front();
      comp.push_back(p);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          GridPos q{p.row + dr, p.col + dc};
          if (numeric.count(q) && seen.insert(q).second) queue.push_back(q);
        }
      }
    }
    components.push_back(std::move(comp));
  }

  // A totals line set off by a blank separator still belongs to the block
  // it sums: merge components joined by an aggregate whose range ends right
  // before the aggregate cell.
  std::map<GridPos, std::size_t> owner;
  for (std::size_t i = 0; i < components.size(); ++i) {
    for (const GridPos& p : components[i]) owner[p] = i;
  }
  std::vector<std::size_t> parent(components.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = root(parent[i]);
  };
  for (const auto& [pos, i] : owner) {
    const Cell* cell = sheet.find(pos.row, pos.col);
    auto agg = cell ? as_aggregate(ctx.workbook, *cell) : std::nullopt;
    if (!agg || agg->ranges.size() != 1) continue;
    const RangeRef& r = agg->ranges.front();
    bool down = r.start.col == pos.col && r.end.col == pos.col &&
                r.end.row == pos.row - 1;
    bool across = r.start.row == pos.row && r.end.row == pos.row &&
                  r.end.col == pos.col - 1;
    if (!down && !across) continue;
    for (const Cell* inner : detail::present_cells(ctx.workbook, r)) {
      auto it = owner.find(GridPos{inner->address.row, inner->address.col});
      if (it != owner.end()) parent[root(it->second)] = root(i);
    }
  }
  std::map<std::size_t, std::vector<GridPos>> merged;
  for (std::size_t i = 0; i < components.size(); ++i) {
    auto& into = merged[root(i)];
    into.insert(into.end(), components[i].begin(), components[i].end());
  }
  components.clear();
  for (auto& [_, comp] : merged) components.push_back(std::move(comp));

  std::vector<TableRegion> candidates;
  for (const auto& comp : components) {
    std::set<GridPos> cells(comp.begin(), comp.end());
    int top = comp.front().row, bottom = top;
    int left = comp.front().col, right = left;
    for (const GridPos& p : comp) {
      top = std::min(top, p.row);
      bottom = std::max(bottom, p.row);
      left = std::min(left, p.col);
      right = std::max(right, p.col);
    }
    // Peel sparse edge lines (stray notes or side calculations touching
    // the block) until every edge is at least half filled.
    auto fill_row = [&](int r) {
      int n = 0;
      for (int c = left; c <= right; ++c) n += cells.count({r, c}) ? 1 : 0;
      return 2 * n >= right - left + 1;
    };
    auto fill_col = [&](int c) {
      int n = 0;
      for (int r = top; r <= bottom; ++r) n += cells.count({r, c}) ? 1 : 0;
      return 2 * n >= bottom - top + 1;
    };
    bool changed = true;
    while (changed && bottom > top && right > left) {
      changed = false;
      if (!fill_row(bottom)) { --bottom; changed = true; continue; }
      if (!fill_row(top)) { ++top; changed = true; continue; }
      if (!fill_col(right)) { --right; changed = true; continue; }
      if (!fill_col(left)) { ++left; changed = true; continue; }
    }
    if (bottom - top < 1 || right - left < 1) continue;

    RangeRef box = make_rect(name, top, left, bottom, right);
    LineVerdict row = classify_line(ctx, sheet, box, Direction::kDown);
    LineVerdict col = classify_line(ctx, sheet, box, Direction::kAcross);
    TableRegion t;
    if (row.totals) {
      t.totals_row = bottom;
      if (row.body_start) top = std::max(top, *row.body_start);
    }
    if (col.totals) {
      t.totals_col = right;
      if (col.body_start) left = std::max(left, *col.body_start);
    }
    int body_bottom = bottom - (t.totals_row ? 1 : 0);
    int body_right = right - (t.totals_col ? 1 : 0);
    if (body_bottom - top < 1 || body_right - left < 1) continue;
    t.bounds = make_rect(name, top, left, bottom, right);
    t.body = make_rect(name, top, left, body_bottom, body_right);
    if (t.has_both_totals()) t.grand_total = CellAddress{name, right, bottom};
    candidates.push_back(std::move(t));
  }

  auto area = [](const TableRegion& t) {
    return static_cast<long long>(t.bounds.rows()) * t.bounds.cols();
  };
  std::sort(candidates.begin(), candidates.end(),
            [&](const TableRegion& a, const TableRegion& b) {
              if (area(a) != area(b)) return area(a) > area(b);
              if (a.bounds.start.row != b.bounds.start.row) {
                return a.bounds.start.row < b.bounds.start.row;
              }
              return a.bounds.start.col < b.bounds.start.col;
            });
  std::vector<TableRegion> out;
  for (auto& t : candidates) {
    bool clash = std::any_of(out.begin(), out.end(), [&](const TableRegion& o) {
      return detail::overlaps(o.bounds, t.bounds);
    });
    if (!clash) out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end(),
            [](const TableRegion& a, const TableRegion& b) {
              return a.bounds.start < b.bounds.start;
            });
  return out;
}

bool tiling_holds(const AuditContext& ctx, const RangeRef& enclosing) {
  const Workbook& wb = ctx.workbook;
  std::vector<std::pair<const Cell*, RangeRef>> groups;
  std::vector<const Cell*> others;
  for (const Cell* cell : detail::present_cells(wb, enclosing)) {
    if (auto agg = as_aggregate(wb, *cell)) {
      if (agg->ranges.size() != 1) return false;
      groups.emplace_back(cell, agg->ranges.front());
    } else if (cell->formula && (root_call_name(cell->formula) == "SUM" ||
                                 root_call_name(cell->formula) == "SUBTOTAL")) {
      return false;  // an aggregate we cannot read statically
    } else if (ctx.values.at(cell->address).is_number()) {
      others.push_back(cell);
    }
  }
  if (groups.empty()) return false;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const RangeRef& r = groups[i].second;
    if (!enclosing.contains(r)) return false;
    for (std::size_t j = 0; j < groups.size(); ++j) {
      if (r.contains(groups[j].first->address)) return false;
      if (j > i && detail::overlaps(r, groups[j].second)) return false;
    }
  }
  for (const Cell* cell : others) {
    int covered = 0;
    for (auto& g : groups) covered += g.second.contains(cell->address) ? 1 : 0;
    if (covered != 1) return false;
  }
  return true;
}

}  // namespace sheetcheck
