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
#include <string>

#include "sheetcheck/workbook.hpp"

namespace sheetcheck::detail {

// Assembles a Workbook for the loaders and for patch application. Formula
// text is parsed here so every entry point applies the same rules.
class WorkbookBuilder {
 public:
  WorkbookBuilder() = default;
  explicit WorkbookBuilder(Workbook base) : wb_(std::move(base)) {}

  void add_sheet(std::string name);
  void set_front_sheet(std::string name);
  void warn(std::string message);

  // Returns false when the position is already occupied. A formula that
  // fails to parse stores #NAME? and records a warning.
  bool add_cell(const CellAddress& address, CellValue value,
                const std::optional<std::string>& formula);
  bool add_parsed_cell(const CellAddress& address, CellValue value,
                       NodePtr formula, std::string formula_text);

  void remove_cell(const CellAddress& address) {
    sheet_for(address)->erase(address.row, address.col);
  }

  Workbook finish() { return std::move(wb_); }

 private:
  Sheet* sheet_for(const CellAddress& address);
  void note_unsupported(const CellAddress& address, const NodePtr& formula);

  Workbook wb_;
};

}  // namespace sheetcheck::detail
