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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "sheetcheck/workbook.hpp"

namespace sheetcheck {

// Canonical workbook format (UTF-8 JSON):
//   {"front_sheet": "S1",
//    "sheets": [{"name": "S1",
//                "cells": [{"ref": "B2", "v": 5, "t": "n", "f": "=..."}]}]}
// "t" is one of n|s|b|e and is inferred from "v" when absent. Throws
// LoadError with the offending location on malformed input, duplicate refs
// or duplicate sheet names. Formulas that fail to parse load as #NAME?
// cells and add a warning.
Workbook load_canonical(std::string_view json_text);

// Inverse of load_canonical. Formulas are written in printed canonical form;
// unparseable formulas keep their original text.
std::string save_canonical(const Workbook& wb);

// Read-only XLSX ingestion: workbook.xml, worksheets, sharedStrings.
// Throws IngestError for a corrupt package or missing required parts.
Workbook read_xlsx(std::span<const std::uint8_t> bytes);

// Picks the reader from the extension (.xlsx or .json). Throws Error
// subclasses on I/O or format problems.
Workbook load_workbook_file(const std::filesystem::path& path);

}  // namespace sheetcheck
