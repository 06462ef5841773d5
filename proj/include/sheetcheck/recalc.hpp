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
#include <set>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "sheetcheck/workbook.hpp"

namespace sheetcheck {

// Dependency graph over formula cells.
//
// edges holds value precedents: cells whose values the formula reads. Cells
// named only as the reference argument of OFFSET/INDEX/ROW/COLUMN, or as an
// endpoint of a range with an OFFSET/INDEX endpoint, are anchors: their
// position matters, not their value, so they do not create edges. A formula
// in B67 reading B51:OFFSET(B67,-1,0) therefore has no self-edge; the range
// is resolved when the cell is evaluated.
struct DepGraph {
  std::map<CellAddress, std::set<CellAddress>> edges;
  std::map<CellAddress, std::set<CellAddress>> anchors;
  std::set<CellAddress> dynamic_nodes;
  // Members of static cycles (including self-loops); evaluate to #CIRC!.
  std::set<CellAddress> cyclic;
  // Formula cells outside cycles, precedents first.
  std::vector<CellAddress> order;
};

DepGraph build_graph(const Workbook& wb);

enum class Provenance { kStored, kComputed };

// Computed values for every cell of a workbook. Immutable once returned.
class ValueMap {
 public:
  struct Entry {
    CellValue value;
    Provenance provenance;
  };

  // Blank for positions that hold no cell.
  const CellValue& at(const CellAddress& a) const;
  std::optional<Provenance> provenance(const CellAddress& a) const;
  const std::map<CellAddress, Entry>& entries() const { return entries_; }

  void set(const CellAddress& a, CellValue v, Provenance p) {
    entries_[a] = Entry{std::move(v), p};
  }

  friend bool operator==(const ValueMap& a, const ValueMap& b);

 private:
  std::map<CellAddress, Entry> entries_;
};

ValueMap recalculate(const Workbook& wb);
ValueMap recalculate(const Workbook& wb, const DepGraph& graph);

// ---------------------------------------------------------------------------
// Function catalog.

// A reference produced while evaluating (a cell, a range, or the result of
// OFFSET/INDEX).
struct RefValue {
  RangeRef range;
};
using Operand = std::variant<CellValue, RefValue>;

class EvalContext {
 public:
  virtual ~EvalContext() = default;
  virtual const Workbook& workbook() const = 0;
  virtual const CellAddress& current_cell() const = 0;
  // Computed value at a canonical address.
  virtual CellValue value_at(const CellAddress& a) = 0;
};

// Supported: SUM AVERAGE COUNT MIN MAX SUBTOTAL(9) IF ABS ROUND FIXED DOLLAR
// OFFSET INDEX ROW COLUMN. Unknown names give #NAME?, bad arity #VALUE!.
// OFFSET and INDEX return references; everything else returns a value.
Operand apply_function(std::string_view name, std::span<const Operand> args,
                       EvalContext& ctx);

bool is_supported_function(std::string_view name);

// Half-away-from-zero rounding on the 15-significant-digit decimal form.
double round_decimal(double x, int digits);

// Text renderings used by FIXED and DOLLAR ("1,234.5", "$1,234.50",
// "($5.00)"). nullopt when digits is out of range.
std::optional<std::string> render_fixed(double x, int digits, bool commas);
std::optional<std::string> render_dollar(double x, int digits);

// ---------------------------------------------------------------------------

struct DiffEntry {
  CellAddress address;
  CellValue stored;
  CellValue computed;
  std::optional<double> delta;  // set when both sides are numbers
};

struct RecalcDiff {
  std::vector<DiffEntry> mismatches;
  // Cells whose recalculation hit #NAME? (unsupported function or name)
  // while the file holds some other value.
  std::vector<DiffEntry> unverifiable;
};

inline constexpr double kRecalcDiffTolerance = 1e-9;

RecalcDiff recalc_diff(const Workbook& wb);
RecalcDiff recalc_diff(const Workbook& wb, const ValueMap& values);

}  // namespace sheetcheck
