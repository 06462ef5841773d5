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

#include "sheetcheck/workbook.hpp"

#include <algorithm>

#include "sheetcheck/error.hpp"
#include "workbook_builder.hpp"

namespace sheetcheck {

const Cell* Sheet::find(int row, int col) const {
  auto it = cells_.find(GridPos{row, col});
  return it == cells_.end() ? nullptr : &it->second;
}

bool Sheet::insert(Cell cell) {
  GridPos pos{cell.address.row, cell.address.col};
  cell.address.sheet = name_;
  cell.address.col_absolute = false;
  cell.address.row_absolute = false;
  auto [it, inserted] = cells_.emplace(pos, std::move(cell));
  if (!inserted) return false;
  last_row_ = std::max(last_row_, pos.row);
  last_col_ = std::max(last_col_, pos.col);
  return true;
}

const Sheet* Workbook::find_sheet(std::string_view name) const {
  auto i = sheet_index(name);
  return i ? &sheets_[*i] : nullptr;
}

std::optional<std::size_t> Workbook::sheet_index(std::string_view name) const {
  for (std::size_t i = 0; i < sheets_.size(); ++i) {
    if (iequals(sheets_[i].name(), name)) return i;
  }
  return std::nullopt;
}

const Cell* Workbook::find_cell(const CellAddress& a) const {
  const Sheet* s = find_sheet(a.sheet);
  return s ? s->find(a.row, a.col) : nullptr;
}

std::optional<CellAddress> Workbook::canonical(const CellAddress& a) const {
  const Sheet* s = find_sheet(a.sheet);
  if (!s) return std::nullopt;
  CellAddress out = a;
  out.sheet = s->name();
  return out;
}

Sheet& Workbook::add_sheet(std::string name) {
  if (name.empty()) throw LoadError("sheet name must not be empty");
  if (find_sheet(name)) {
    throw LoadError("duplicate sheet name '" + name + "'");
  }
  sheets_.emplace_back(std::move(name));
  if (front_sheet_.empty()) front_sheet_ = sheets_.front().name();
  return sheets_.back();
}

void Workbook::set_front_sheet(std::string name) {
  const Sheet* s = find_sheet(name);
  if (!s) throw LoadError("front sheet '" + name + "' does not exist");
  front_sheet_ = s->name();
}

RangeRef clip_to_used(const Workbook& wb, const RangeRef& range) {
  if (!iequals(range.start.sheet, range.end.sheet)) {
    throw RangeError("cross-sheet range " + format_range(range, true) +
                     " is not supported");
  }
  const Sheet* sheet = wb.find_sheet(range.start.sheet);
  if (!sheet) throw RangeError("unknown sheet '" + range.start.sheet + "'");
  RangeRef r = range;
  r.start.sheet = sheet->name();
  r.end.sheet = sheet->name();
  if (r.whole_column) {
    r.end.row = std::max(1, std::min(r.end.row, sheet->last_row()));
    r.whole_column = false;
    if (sheet->last_row() == 0) r.end.row = 0;  // empty: nothing to visit
  }
  return r;
}

std::vector<std::pair<CellAddress, CellValue>> cells_in_range(
    const Workbook& wb, const RangeRef& range) {
  RangeRef r = clip_to_used(wb, range);
  const Sheet& sheet = *wb.find_sheet(r.start.sheet);
  std::vector<std::pair<CellAddress, CellValue>> out;
  for (int row = r.start.row; row <= r.end.row; ++row) {
    for (int col = r.start.col; col <= r.end.col; ++col) {
      CellAddress a{sheet.name(), col, row};
      const Cell* c = sheet.find(row, col);
      out.emplace_back(std::move(a), c ? c->value : CellValue());
    }
  }
  return out;
}

}  // namespace sheetcheck

namespace sheetcheck::detail {

namespace {

void find_unsupported(const Node& n, std::vector<std::string>& names) {
  if (auto* name = n.as<ast::Name>()) {
    names.push_back(name->name);
  } else if (auto* r = n.as<ast::Range>()) {
    find_unsupported(*r->start, names);
    find_unsupported(*r->end, names);
  } else if (auto* u = n.as<ast::Unary>()) {
    find_unsupported(*u->child, names);
  } else if (auto* b = n.as<ast::Binary>()) {
    find_unsupported(*b->lhs, names);
    find_unsupported(*b->rhs, names);
  } else if (auto* c = n.as<ast::Call>()) {
    for (auto& a : c->args) find_unsupported(*a, names);
  } else if (auto* p = n.as<ast::Paren>()) {
    find_unsupported(*p->child, names);
  }
}

}  // namespace

void WorkbookBuilder::add_sheet(std::string name) {
  wb_.add_sheet(std::move(name));
}

void WorkbookBuilder::set_front_sheet(std::string name) {
  wb_.set_front_sheet(std::move(name));
}

void WorkbookBuilder::warn(std::string message) {
  wb_.warnings_.push_back(std::move(message));
}

Sheet* WorkbookBuilder::sheet_for(const CellAddress& address) {
  auto i = wb_.sheet_index(address.sheet);
  if (!i) throw LoadError("unknown sheet '" + address.sheet + "'");
  return &wb_.sheets_[*i];
}

void WorkbookBuilder::note_unsupported(const CellAddress& address,
                                       const NodePtr& formula) {
  std::vector<std::string> names;
  find_unsupported(*formula, names);
  for (const auto& n : names) {
    warn(format_address(address, true) + ": defined name '" + n +
         "' is not supported and evaluates to #NAME?");
  }
}

bool WorkbookBuilder::add_cell(const CellAddress& address, CellValue value,
                               const std::optional<std::string>& formula) {
  Sheet* sheet = sheet_for(address);
  Cell cell;
  cell.address = address;
  if (!formula) {
    cell.value = std::move(value);
    return sheet->insert(std::move(cell));
  }
  cell.formula_text = *formula;
  try {
    cell.formula = parse_formula(*formula, sheet->name());
    cell.value = std::move(value);
  } catch (const ParseError& e) {
    warn(format_address(address, true) + ": unparseable formula '" +
         *formula + "': " + e.what());
    cell.value = CellValue::error(ErrorCode::kName);
  }
  if (cell.formula) note_unsupported(address, cell.formula);
  return sheet->insert(std::move(cell));
}

bool WorkbookBuilder::add_parsed_cell(const CellAddress& address,
                                      CellValue value, NodePtr formula,
                                      std::string formula_text) {
  Sheet* sheet = sheet_for(address);
  Cell cell;
  cell.address = address;
  cell.value = std::move(value);
  cell.formula = std::move(formula);
  cell.formula_text = std::move(formula_text);
  if (cell.formula) note_unsupported(address, cell.formula);
  return sheet->insert(std::move(cell));
}

}  // namespace sheetcheck::detail
