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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sheetcheck/audit.hpp"
#include "sheetcheck/workbook.hpp"

namespace sheetcheck {

// Sidecar answers to the ten governance questions. Every answer is text;
// list answers may be empty.
struct Manifest {
  struct Q1 { std::string purpose, criticality; } q1;
  struct Q2 {
    std::string location, version_id;
    std::vector<std::string> data_sources, dependents;
  } q2;
  struct Q3 { std::string usage_doc; } q3;
  struct Q4 { std::string audience; } q4;
  struct Q5 { std::string periodicity; } q5;
  struct Q6 { std::string reviewer, test_evidence; } q6;
  struct Q7 { std::string signoff, reconciliation; } q7;
  struct Q8 { std::vector<std::string> internal_checks; } q8;
  struct Q9 { std::vector<std::string> design_conformity; } q9;
  struct Q10 { std::vector<std::string> pain_points; } q10;
};

// Strict parse: unknown keys and wrongly typed values throw ManifestError.
// Absent answers come back empty.
Manifest parse_manifest(std::string_view json_text);

// One finding per incomplete question (rule "q1".."q10"): q1 is an error,
// the rest warn. With a workbook, each q8 entry must name an existing check
// cell. Throws ManifestError on a malformed document.
std::vector<Finding> validate_manifest(std::string_view json_text,
                                       const Workbook* workbook = nullptr);

// "<dir>/<stem>.manifest.json" next to the workbook.
std::filesystem::path default_manifest_path(const std::filesystem::path& workbook);

}  // namespace sheetcheck
