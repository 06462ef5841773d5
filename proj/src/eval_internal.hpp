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

#include "sheetcheck/recalc.hpp"

namespace sheetcheck::detail {

// Value of an operand: references are read through the context. A
// multi-cell reference in value position is #VALUE!.
CellValue deref(const Operand& op, EvalContext& ctx);

// Arithmetic coercion: Blank -> 0, bool -> 0/1, numeric text -> number,
// other text -> #VALUE!, errors pass through.
std::variant<double, ErrorCode> to_number(const CellValue& v);

// Visits the cells of a reference that hold something, in row-major order.
// The callback returns false to stop early.
template <typename Fn>
void for_each_present(const Workbook& wb, const RangeRef& range, Fn&& fn) {
  const Sheet* sheet = wb.find_sheet(range.start.sheet);
  if (!sheet) return;
  RangeRef r = range;
  if (r.whole_column) {
    r.end.row = sheet->last_row();
    if (r.end.row < r.start.row) return;
  }
  auto it = sheet->cells().lower_bound(GridPos{r.start.row, r.start.col});
  auto end = sheet->cells().upper_bound(GridPos{r.end.row, r.end.col});
  for (; it != end; ++it) {
    const GridPos& pos = it->first;
    if (pos.col < r.start.col || pos.col > r.end.col) continue;
    if (!fn(it->second)) return;
  }
}

}  // namespace sheetcheck::detail
