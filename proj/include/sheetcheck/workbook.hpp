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
#include <string>
#include <utility>
#include <vector>

#include "sheetcheck/address.hpp"
#include "sheetcheck/formula.hpp"
#include "sheetcheck/value.hpp"

namespace sheetcheck {

namespace detail {
class WorkbookBuilder;
}

// A cell as stored in the file. Formula cells keep their cached value so a
// recalculation can be compared against it.
struct Cell {
  CellAddress address;
  CellValue value;
  NodePtr formula;           // null for constants and unparseable formulas
  std::string formula_text;  // source text when the cell had a formula

  bool has_formula() const { return formula != nullptr; }
};

// Row-major key inside a sheet.
struct GridPos {
  int row;
  int col;
  auto operator<=>(const GridPos&) const = default;
};

class Sheet {
 public:
  explicit Sheet(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  const std::map<GridPos, Cell>& cells() const { return cells_; }
  const Cell* find(int row, int col) const;

  // Largest row / column holding any cell; 0 for an empty sheet.
  int last_row() const { return last_row_; }
  int last_col() const { return last_col_; }

  // Returns false when the position is already occupied.
  bool insert(Cell cell);
  bool erase(int row, int col) { return cells_.erase(GridPos{row, col}) > 0; }

 private:
  std::string name_;
  std::map<GridPos, Cell> cells_;
  int last_row_ = 0;
  int last_col_ = 0;
};

// Immutable once built; every operation on it is a pure read.
class Workbook {
 public:
  Workbook() = default;

  const std::vector<Sheet>& sheets() const { return sheets_; }
  const std::string& front_sheet() const { return front_sheet_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Case-insensitive lookup.
  const Sheet* find_sheet(std::string_view name) const;
  std::optional<std::size_t> sheet_index(std::string_view name) const;

  const Cell* find_cell(const CellAddress& a) const;

  // Rewrites the sheet name to the workbook's own spelling. nullopt when no
  // such sheet exists.
  std::optional<CellAddress> canonical(const CellAddress& a) const;

 private:
  friend class detail::WorkbookBuilder;

  Sheet& add_sheet(std::string name);  // throws LoadError on duplicates
  void set_front_sheet(std::string name);

  std::vector<Sheet> sheets_;
  std::string front_sheet_;
  std::vector<std::string> warnings_;
};

// Cells of a rectangle in row-major order, Blank for absent positions.
// Whole-column ranges stop at the sheet's last used row. Throws RangeError
// for cross-sheet ranges or unknown sheets.
std::vector<std::pair<CellAddress, CellValue>> cells_in_range(
    const Workbook& wb, const RangeRef& range);

// The rectangle actually enumerated for a range (whole columns clipped).
RangeRef clip_to_used(const Workbook& wb, const RangeRef& range);

}  // namespace sheetcheck
