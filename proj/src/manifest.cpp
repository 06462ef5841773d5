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

#include "sheetcheck/manifest.hpp"

#include <map>

#include "json.hpp"

#include "sheetcheck/error.hpp"

namespace sheetcheck {

using nlohmann::json;

namespace {

enum class Kind { kText, kList };

struct Field {
  const char* name;
  Kind kind;
};

// Question id -> sub-answers, in question order.
const std::vector<std::pair<std::string, std::vector<Field>>>& schema() {
  static const std::vector<std::pair<std::string, std::vector<Field>>> s = {
      {"q1", {{"purpose", Kind::kText}, {"criticality", Kind::kText}}},
      {"q2", {{"location", Kind::kText}, {"version_id", Kind::kText},
              {"data_sources", Kind::kList}, {"dependents", Kind::kList}}},
      {"q3", {{"usage_doc", Kind::kText}}},
      {"q4", {{"audience", Kind::kText}}},
      {"q5", {{"periodicity", Kind::kText}}},
      {"q6", {{"reviewer", Kind::kText}, {"test_evidence", Kind::kText}}},
      {"q7", {{"signoff", Kind::kText}, {"reconciliation", Kind::kText}}},
      {"q8", {{"internal_checks", Kind::kList}}},
      {"q9", {{"design_conformity", Kind::kList}}},
      {"q10", {{"pain_points", Kind::kList}}},
  };
  return s;
}

// Text answers keyed "q2.location"; lists keyed the same way. A missing
// key means the answer was absent.
struct Answers {
  std::map<std::string, std::string> text;
  std::map<std::string, std::vector<std::string>> lists;
};

Answers read_answers(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ManifestError(std::string("malformed manifest JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ManifestError("manifest must be a JSON object");
  std::map<std::string, const std::vector<Field>*> questions;
  for (const auto& [id, fields] : schema()) questions[id] = &fields;
  Answers out;
  for (auto q = doc.begin(); q != doc.end(); ++q) {
    auto it = questions.find(q.key());
    if (it == questions.end()) {
      throw ManifestError("unknown manifest key '" + q.key() + "'");
    }
    if (!q.value().is_object()) throw ManifestError(q.key() + " must be an object");
    for (auto a = q.value().begin(); a != q.value().end(); ++a) {
      const Field* field = nullptr;
      for (const Field& f : *it->second) {
        if (a.key() == f.name) field = &f;
      }
      std::string key = q.key() + "." + a.key();
      if (!field) throw ManifestError("unknown manifest key '" + key + "'");
      if (field->kind == Kind::kText) {
        if (!a.value().is_string()) throw ManifestError(key + " must be text");
        out.text[key] = a.value().get<std::string>();
      } else {
        if (!a.value().is_array()) throw ManifestError(key + " must be a list");
        auto& list = out.lists[key];
        for (const json& item : a.value()) {
          if (!item.is_string()) throw ManifestError(key + " must hold text items");
          list.push_back(item.get<std::string>());
        }
      }
    }
  }
  return out;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

Manifest parse_manifest(std::string_view json_text) {
  Answers a = read_answers(json_text);
  auto t = [&](const char* key) {
    auto it = a.text.find(key);
    return it == a.text.end() ? std::string() : it->second;
  };
  auto l = [&](const char* key) {
    auto it = a.lists.find(key);
    return it == a.lists.end() ? std::vector<std::string>() : it->second;
  };
  Manifest m;
  m.q1 = {t("q1.purpose"), t("q1.criticality")};
  m.q2 = {t("q2.location"), t("q2.version_id"), l("q2.data_sources"),
          l("q2.dependents")};
  m.q3 = {t("q3.usage_doc")};
  m.q4 = {t("q4.audience")};
  m.q5 = {t("q5.periodicity")};
  m.q6 = {t("q6.reviewer"), t("q6.test_evidence")};
  m.q7 = {t("q7.signoff"), t("q7.reconciliation")};
  m.q8 = {l("q8.internal_checks")};
  m.q9 = {l("q9.design_conformity")};
  m.q10 = {l("q10.pain_points")};
  return m;
}

std::vector<Finding> validate_manifest(std::string_view json_text,
                                       const Workbook* workbook) {
  Answers a = read_answers(json_text);
  std::vector<Finding> out;
  for (const auto& [id, fields] : schema()) {
    std::vector<std::string> missing;
    for (const Field& f : fields) {
      std::string key = id + "." + f.name;
      if (f.kind == Kind::kText) {
        auto it = a.text.find(key);
        if (it == a.text.end() || blank(it->second)) missing.push_back(key);
      } else if (!a.lists.count(key)) {
        missing.push_back(key);
      }
    }
    if (missing.empty()) continue;
    Finding f;
    f.rule = id;
    f.severity = id == "q1" ? Severity::kError : Severity::kWarning;
    f.message = "missing or empty answer:";
    for (const std::string& m : missing) f.message += " " + m;
    out.push_back(std::move(f));
  }
  if (!workbook) return out;
  auto checks = a.lists.find("q8.internal_checks");
  if (checks == a.lists.end()) return out;
  for (const std::string& entry : checks->second) {
    Finding f;
    f.rule = "q8";
    f.severity = Severity::kWarning;
    f.message = "declared check not found: " + entry;
    try {
      auto addr = workbook->canonical(parse_address(entry, workbook->front_sheet()));
      const Cell* cell = addr ? workbook->find_cell(*addr) : nullptr;
      if (cell && cell->has_formula() && is_check_cell(*cell->formula)) continue;
      if (addr) f.cells = {*addr};
    } catch (const AddressError&) {
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::filesystem::path default_manifest_path(const std::filesystem::path& workbook) {
  std::filesystem::path p = workbook;
  p.replace_extension(".manifest.json");
  return p;
}

}  // namespace sheetcheck
