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

#include <cmath>

#include "sheetcheck/recalc.hpp"

namespace sheetcheck {

RecalcDiff recalc_diff(const Workbook& wb) {
  return recalc_diff(wb, recalculate(wb));
}

RecalcDiff recalc_diff(const Workbook& wb, const ValueMap& values) {
  RecalcDiff diff;
  for (const Sheet& sheet : wb.sheets()) {
    for (const auto& [pos, cell] : sheet.cells()) {
      if (!cell.formula || cell.value.is_blank()) continue;
      const CellValue& computed = values.at(cell.address);
      DiffEntry entry{cell.address, cell.value, computed, std::nullopt};
      if (computed.is_error() && computed.as_error() == ErrorCode::kName &&
          !(cell.value == computed)) {
        diff.unverifiable.push_back(std::move(entry));
        continue;
      }
      if (cell.value.is_number() && computed.is_number()) {
        double delta = std::fabs(cell.value.as_number() - computed.as_number());
        if (delta > kRecalcDiffTolerance) {
          entry.delta = delta;
          diff.mismatches.push_back(std::move(entry));
        }
        continue;
      }
      if (!(cell.value == computed)) diff.mismatches.push_back(std::move(entry));
    }
  }
  return diff;
}

}  // namespace sheetcheck
