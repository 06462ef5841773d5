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
#include <charconv>
#include <cmath>
#include <map>

#include "json.hpp"

#include "audit_util.hpp"
#include "sheetcheck/checks.hpp"
#include "sheetcheck/error.hpp"
#include "workbook_builder.hpp"

namespace sheetcheck {

namespace {

using detail::as_aggregate;
using detail::make_rect;
using detail::present_cells;

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string quoted(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    out += c;
    if (c == '"') out += '"';
  }
  return out + "\"";
}

// The same line extended by one cell at each end where that cell holds no
// number, so the range begins and ends at a blank or a label.
RangeRef padded(const AuditContext& ctx, const RangeRef& span) {
  bool vertical = span.start.col == span.end.col;
  RangeRef out = span;
  CellAddress before = span.start;
  CellAddress after = span.end;
  (vertical ? before.row : before.col) -= 1;
  (vertical ? after.row : after.col) += 1;
  if (before.row >= 1 && before.col >= 1 && !ctx.values.at(before).is_number()) {
    out.start = before;
  }
  if (after.row <= kMaxRow && after.col <= kMaxCol &&
      !ctx.values.at(after).is_number()) {
    out.end = after;
  }
  return out;
}

// Address of a cell on `sheet` whose whole formula is SUM over span, or
// over span padded with cells that hold no number.
std::optional<CellAddress> cell_summing(const AuditContext& ctx,
                                        const std::string& sheet,
                                        const RangeRef& span) {
  const Sheet* s = ctx.workbook.find_sheet(sheet);
  if (!s) return std::nullopt;
  std::optional<CellAddress> padded_match;
  for (const auto& [pos, cell] : s->cells()) {
    auto agg = as_aggregate(ctx.workbook, cell);
    if (!agg || agg->function != "SUM" || agg->ranges.size() != 1) continue;
    const RangeRef& r = agg->ranges.front();
    if (r == span) return cell.address;
    if (padded_match || !r.contains(span) ||
        (r.rows() > 1 && r.cols() > 1) || r.contains(cell.address)) {
      continue;
    }
    bool extra_numbers = false;
    for (const Cell* c : present_cells(ctx.workbook, r)) {
      if (!span.contains(c->address) && ctx.values.at(c->address).is_number()) {
        extra_numbers = true;
      }
    }
    if (!extra_numbers) padded_match = cell.address;
  }
  return padded_match;
}

bool is_blank_target(const Workbook& wb, const CellAddress& a) {
  const Cell* c = wb.find_cell(a);
  return !c || (c->value.is_blank() && c->formula_text.empty());
}

// Multiset of plain numbers a term adds up, looking through aggregates.
// SUBTOTAL skips SUBTOTAL cells in its range, as the evaluator does.
void expand_raw(const AuditContext& ctx, const CellAddress& a,
                std::map<CellAddress, int>& out, int depth) {
  if (depth > 64) return;
  const Cell* cell = ctx.workbook.find_cell(a);
  if (!cell) return;
  if (auto agg = as_aggregate(ctx.workbook, *cell)) {
    for (const RangeRef& r : agg->ranges) {
      for (const Cell* inner : present_cells(ctx.workbook, r)) {
        if (agg->function == "SUBTOTAL" &&
            root_call_name(inner->formula) == "SUBTOTAL") {
          continue;
        }
        expand_raw(ctx, inner->address, out, depth + 1);
      }
    }
    return;
  }
  if (ctx.values.at(a).is_number()) ++out[a];
}

std::string sum_text(const std::string& fn, const RangeRef& r) {
  return fn == "SUBTOTAL" ? "=SUBTOTAL(9," + format_range(r) + ")"
                          : "=SUM(" + format_range(r) + ")";
}

// Fills the rewrites of `rw` that keep the value `covered` describes.
// covered: plain numbers the current total adds, with multiplicity.
bool fill_rewrites(const AuditContext& ctx, TotalRewrite& rw,
                   const std::map<CellAddress, int>& covered) {
  const RangeRef& e = rw.enclosing;
  std::map<CellAddress, int> plain;
  std::vector<const Cell*> aggregates;
  for (const Cell* cell : present_cells(ctx.workbook, e)) {
    std::string root = root_call_name(cell->formula);
    if (root == "SUM" || root == "SUBTOTAL") {
      if (!as_aggregate(ctx.workbook, *cell)) return false;
      aggregates.push_back(cell);
    } else if (ctx.values.at(cell->address).is_number()) {
      plain[cell->address] = 1;
    }
  }
  if (covered != plain) return false;
  std::string range = format_range(e);
  if (aggregates.empty()) {
    rw.plain_sum = "=SUM(" + range + ")";
    return true;
  }
  rw.subtotal = "=SUBTOTAL(9," + range + ")";
  for (const Cell* cell : aggregates) {
    auto agg = as_aggregate(ctx.workbook, *cell);
    if (agg->function != "SUM") continue;
    std::string args;
    for (const RangeRef& r : agg->ranges) args += "," + format_range(r);
    rw.inner.emplace_back(cell->address, "=SUBTOTAL(9" + args + ")");
  }
  if (tiling_holds(ctx, e)) rw.halved_sum = "=SUM(" + range + ")/2";
  return true;
}

RangeRef bounding(const std::vector<RangeRef>& parts) {
  RangeRef out = parts.front();
  for (const RangeRef& r : parts) {
    out.start.row = std::min(out.start.row, r.start.row);
    out.start.col = std::min(out.start.col, r.start.col);
    out.end.row = std::max(out.end.row, r.end.row);
    out.end.col = std::max(out.end.col, r.end.col);
  }
  return out;
}

std::optional<TotalRewrite> rewrite_chain(const AuditContext& ctx,
                                          const Cell& cell,
                                          const detail::FlaggedChain& chain) {
  if (chain.has_minus) return std::nullopt;
  const std::string& sheet = cell.address.sheet;
  std::vector<RangeRef> parts;
  std::map<CellAddress, int> covered;
  for (const detail::ChainLeaf& leaf : chain.leaves) {
    if (leaf.cell) {
      if (leaf.cell->sheet != sheet) return std::nullopt;
      parts.push_back(RangeRef{*leaf.cell, *leaf.cell, false});
      if (const Cell* c = ctx.workbook.find_cell(*leaf.cell)) {
        if (auto agg = as_aggregate(ctx.workbook, *c)) {
          parts.insert(parts.end(), agg->ranges.begin(), agg->ranges.end());
        }
      }
      expand_raw(ctx, *leaf.cell, covered, 0);
    } else {
      const RangeRef& r = *leaf.inline_sum;
      if (r.start.sheet != sheet) return std::nullopt;
      parts.push_back(r);
      for (const Cell* inner : present_cells(ctx.workbook, r)) {
        expand_raw(ctx, inner->address, covered, 0);
      }
    }
  }
  TotalRewrite rw;
  rw.cell = cell.address;
  rw.enclosing = bounding(parts);
  if (rw.enclosing.contains(cell.address)) return std::nullopt;
  if (!fill_rewrites(ctx, rw, covered)) return std::nullopt;
  return rw;
}

std::optional<TotalRewrite> rewrite_double_count(
    const AuditContext& ctx, const Cell& cell, const detail::DoubleCount& dc) {
  if (!dc.whole_formula || dc.outer != "SUM") return std::nullopt;
  TotalRewrite rw;
  rw.cell = cell.address;
  rw.enclosing = dc.range;
  if (rw.enclosing.contains(cell.address)) return std::nullopt;
  // The intended total is every plain number in the range once.
  std::map<CellAddress, int> intended;
  for (const Cell* c : present_cells(ctx.workbook, dc.range)) {
    std::string root = root_call_name(c->formula);
    if (root != "SUM" && root != "SUBTOTAL" &&
        ctx.values.at(c->address).is_number()) {
      intended[c->address] = 1;
    }
  }
  if (!fill_rewrites(ctx, rw, intended)) return std::nullopt;
  return rw;
}

}  // namespace

int check_rounding_digits(double tolerance) {
  int needed = tolerance > 0 ? static_cast<int>(std::ceil(-std::log10(tolerance))) : 0;
  return std::clamp(needed, 0, 9) + 6;
}

std::string crossfoot_check_formula(const AuditContext& ctx,
                                    const TableRegion& table) {
  if (!table.has_both_totals()) {
    throw GenerationError("table " + format_range(table.bounds, true) +
                          " lacks a totals row or totals column");
  }
  const std::string& sheet = table.bounds.start.sheet;
  RangeRef row_totals = make_rect(sheet, table.body.start.row, *table.totals_col,
                                  table.body.end.row, *table.totals_col);
  RangeRef col_totals = make_rect(sheet, *table.totals_row, table.body.start.col,
                                  *table.totals_row, table.body.end.col);
  auto lhs = cell_summing(ctx, sheet, row_totals);
  auto rhs = cell_summing(ctx, sheet, col_totals);
  std::string a = lhs ? format_address(*lhs)
                      : sum_text("SUM", padded(ctx, row_totals)).substr(1);
  std::string b = rhs ? format_address(*rhs)
                      : sum_text("SUM", padded(ctx, col_totals)).substr(1);
  std::string text = "=IF(ROUND(ABS(" + a + "-" + b + ")," +
                     std::to_string(check_rounding_digits(ctx.config.tolerance_abs)) +
                     ")<" +
                     shortest(ctx.config.tolerance_abs) + ",\"\"," +
                     quoted(ctx.config.check_message) + ")";
  return print_formula(parse_formula(text, sheet));
}

CheckPatch generate_crossfoot_check(const AuditContext& ctx,
                                    const TableRegion& table,
                                    const std::set<CellAddress>& taken) {
  std::string formula = crossfoot_check_formula(ctx, table);
  const CellAddress& grand = *table.grand_total;
  std::vector<CellAddress> candidates;
  for (int d = 1; d <= 3; ++d) {
    if (grand.row + d <= kMaxRow) {
      candidates.push_back(CellAddress{grand.sheet, grand.col, grand.row + d});
    }
  }
  for (int d = 1; d <= 3; ++d) {
    if (grand.col + d <= kMaxCol) {
      candidates.push_back(CellAddress{grand.sheet, grand.col + d, grand.row});
    }
  }
  for (const CellAddress& c : candidates) {
    if (is_blank_target(ctx.workbook, c) && !taken.count(c)) {
      return CheckPatch{c, formula, "R1", table.bounds};
    }
  }
  throw GenerationError("no blank cell within 3 cells below or right of " +
                        format_address(grand, true) +
                        "; place the check manually: " + formula);
}

std::vector<CheckPatch> generate_checks(const AuditContext& ctx) {
  std::vector<CheckPatch> out;
  std::set<CellAddress> taken;
  for (const Sheet& sheet : ctx.workbook.sheets()) {
    for (const TableRegion& t : detect_tables(ctx, sheet)) {
      if (!t.has_both_totals() || detail::table_has_check(ctx, t)) continue;
      CheckPatch p = generate_crossfoot_check(ctx, t, taken);
      taken.insert(p.target);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::optional<TotalRewrite> suggest_total_rewrite(const AuditContext& ctx,
                                                  const CellAddress& at) {
  const Cell* cell = ctx.workbook.find_cell(at);
  if (!cell || !cell->formula) return std::nullopt;
  if (auto chain = detail::flagged_chain(ctx, *cell)) {
    return rewrite_chain(ctx, *cell, *chain);
  }
  if (auto dc = detail::flagged_double_count(ctx, *cell)) {
    return rewrite_double_count(ctx, *cell, *dc);
  }
  return std::nullopt;
}

Workbook apply_patches(const Workbook& wb,
                       const std::vector<CheckPatch>& patches) {
  std::vector<std::string> problems;
  std::vector<NodePtr> parsed;
  std::set<CellAddress> seen;
  for (const CheckPatch& p : patches) {
    std::string where = format_address(p.target, true);
    auto target = wb.canonical(p.target);
    if (!target) {
      problems.push_back(where + ": unknown sheet");
      parsed.push_back(nullptr);
      continue;
    }
    if (!is_blank_target(wb, *target)) {
      problems.push_back(where + ": target is occupied");
    } else if (!seen.insert(*target).second) {
      problems.push_back(where + ": targeted by more than one patch");
    }
    try {
      parsed.push_back(parse_formula(p.formula, target->sheet));
    } catch (const ParseError& e) {
      problems.push_back(where + ": " + e.what());
      parsed.push_back(nullptr);
    }
  }
  if (!problems.empty()) {
    std::string msg = "patches not applied:";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw ApplyError(msg);
  }
  detail::WorkbookBuilder builder(wb);
  for (std::size_t i = 0; i < patches.size(); ++i) {
    CellAddress target = *wb.canonical(patches[i].target);
    builder.remove_cell(target);  // a stored blank placeholder, if any
    builder.add_parsed_cell(target, CellValue(), parsed[i],
                            print_formula(parsed[i]));
  }
  return builder.finish();
}

std::string patches_to_json(const std::vector<CheckPatch>& patches) {
  nlohmann::json out = nlohmann::json::array();
  for (const CheckPatch& p : patches) {
    nlohmann::json j;
    j["target"] = format_address(p.target, true);
    j["formula"] = p.formula;
    j["rule"] = p.rule;
    if (p.table) j["table"] = format_range(*p.table, true);
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::vector<CheckPatch> patches_from_json(std::string_view json_text,
                                          const Workbook& wb) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ApplyError(std::string("malformed patch list: ") + e.what());
  }
  if (!doc.is_array()) throw ApplyError("patch list must be a JSON array");
  std::string default_sheet =
      wb.sheets().empty() ? std::string() : wb.front_sheet();
  std::vector<CheckPatch> out;
  for (const auto& j : doc) {
    if (!j.is_object() || !j.contains("target") || !j.contains("formula") ||
        !j["target"].is_string() || !j["formula"].is_string()) {
      throw ApplyError("each patch needs string fields 'target' and 'formula'");
    }
    CheckPatch p;
    try {
      p.target = parse_address(j["target"].get<std::string>(), default_sheet);
      if (j.contains("table") && j["table"].is_string()) {
        p.table = parse_range(j["table"].get<std::string>(), default_sheet);
      }
    } catch (const AddressError& e) {
      throw ApplyError(std::string("bad patch address: ") + e.what());
    }
    p.formula = j["formula"].get<std::string>();
    p.rule = j.value("rule", "R1");
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace sheetcheck
