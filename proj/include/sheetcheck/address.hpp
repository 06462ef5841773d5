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

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace sheetcheck {

inline constexpr int kMaxCol = 16384;
inline constexpr int kMaxRow = 1048576;

// A cell position on a named sheet. The '$' markers are kept so references
// print back the way they were written, but they do not take part in
// equality or ordering.
struct CellAddress {
  std::string sheet;
  int col = 1;
  int row = 1;
  bool col_absolute = false;
  bool row_absolute = false;

  friend bool operator==(const CellAddress& a, const CellAddress& b) {
    return a.col == b.col && a.row == b.row && a.sheet == b.sheet;
  }
  friend std::strong_ordering operator<=>(const CellAddress& a,
                                          const CellAddress& b) {
    if (auto c = a.sheet <=> b.sheet; c != 0) return c;
    if (auto c = a.row <=> b.row; c != 0) return c;
    return a.col <=> b.col;
  }
};

// Rectangle on one sheet. Whole-column ranges ("B:B") span every row and are
// clipped to the sheet's used extent when enumerated.
struct RangeRef {
  CellAddress start;
  CellAddress end;
  bool whole_column = false;

  int rows() const { return end.row - start.row + 1; }
  int cols() const { return end.col - start.col + 1; }
  bool contains(const CellAddress& a) const;
  bool contains(const RangeRef& r) const;

  friend bool operator==(const RangeRef& a, const RangeRef& b) {
    return a.start == b.start && a.end == b.end &&
           a.whole_column == b.whole_column;
  }
  friend std::strong_ordering operator<=>(const RangeRef& a,
                                          const RangeRef& b) {
    if (auto c = a.start <=> b.start; c != 0) return c;
    if (auto c = a.end <=> b.end; c != 0) return c;
    return a.whole_column <=> b.whole_column;
  }
};

// "A" -> 1, "Z" -> 26, "AA" -> 27. Returns nullopt for anything that is not
// 1-3 ASCII letters or exceeds the grid.
std::optional<int> column_from_letters(std::string_view letters);
std::string column_letters(int col);

// Parses an A1 reference with optional "Sheet!" / "'Quoted sheet'!" prefix.
// Throws AddressError naming the offending token.
CellAddress parse_address(std::string_view text,
                          std::string_view current_sheet);

// Parses "A1:B5", "Sheet!A1:B5", "B:B" or a single cell (as a 1x1 range).
RangeRef parse_range(std::string_view text, std::string_view current_sheet);

// Canonical text: "B67", "$H$10". With a sheet prefix when qualify is set.
std::string format_address(const CellAddress& a, bool qualify = false);
std::string format_range(const RangeRef& r, bool qualify = false);

// Sheet names that are not plain identifiers need quoting in formulas.
std::string quote_sheet_name(std::string_view name);

bool iequals(std::string_view a, std::string_view b);

}  // namespace sheetcheck
