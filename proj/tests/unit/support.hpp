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

#include <algorithm>
#include <string>
#include <vector>

#include "json.hpp"
#include "sheetcheck/audit.hpp"
#include "sheetcheck/io.hpp"
#include "sheetcheck/recalc.hpp"

namespace sheetcheck::testing {

// One cell of a hand-built workbook: a value, a formula, or both.
struct Spec {
  Spec(std::string s, std::string r, nlohmann::json value = nullptr,
       std::string formula = "")
      : sheet(std::move(s)), ref(std::move(r)), v(std::move(value)),
        f(std::move(formula)) {}
  std::string sheet;
  std::string ref;
  nlohmann::json v;
  std::string f;
};

inline Workbook build(const std::vector<Spec>& cells,
                      std::vector<std::string> sheet_order = {},
                      const std::string& front = "") {
  nlohmann::json doc;
  doc["sheets"] = nlohmann::json::array();
  for (const Spec& c : cells) {
    if (std::find(sheet_order.begin(), sheet_order.end(), c.sheet) ==
        sheet_order.end()) {
      sheet_order.push_back(c.sheet);
    }
  }
  for (const std::string& name : sheet_order) {
    nlohmann::json cs = nlohmann::json::array();
    for (const Spec& c : cells) {
      if (c.sheet != name) continue;
      nlohmann::json x = {{"ref", c.ref}};
      if (!c.v.is_null()) x["v"] = c.v;
      if (!c.f.empty()) x["f"] = c.f;
      cs.push_back(x);
    }
    doc["sheets"].push_back({{"name", name}, {"cells", cs}});
  }
  if (!front.empty()) doc["front_sheet"] = front;
  return load_canonical(doc.dump());
}

inline CellValue value(const Workbook& wb, const std::string& ref) {
  return recalculate(wb).at(parse_address(ref, wb.front_sheet()));
}

struct Harness {
  explicit Harness(const Workbook& w, AuditConfig c = {})
      : wb(w), config(std::move(c)), graph(build_graph(wb)),
        values(recalculate(wb, graph)), ctx{wb, graph, values, config} {}
  Workbook wb;
  AuditConfig config;
  DepGraph graph;
  ValueMap values;
  AuditContext ctx;
};

inline std::size_t count(const std::vector<Finding>& findings,
                         const std::string& rule, Severity severity) {
  return std::count_if(findings.begin(), findings.end(), [&](const Finding& f) {
    return f.rule == rule && f.severity == severity;
  });
}

inline CellAddress at(const std::string& sheet, const std::string& ref) {
  return parse_address(ref, sheet);
}

}  // namespace sheetcheck::testing
