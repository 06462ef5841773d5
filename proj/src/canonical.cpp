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
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sheetcheck/error.hpp"
#include "sheetcheck/io.hpp"
#include "workbook_builder.hpp"

namespace sheetcheck {

namespace {

using nlohmann::json;

std::string where(std::size_t sheet_index, const std::string& sheet,
                  std::size_t cell_index) {
  return "sheets[" + std::to_string(sheet_index) + "] '" + sheet +
         "' cells[" + std::to_string(cell_index) + "]";
}

CellValue decode_value(const json& cell, const std::string& loc) {
  auto v = cell.find("v");
  std::string type;
  if (auto t = cell.find("t"); t != cell.end()) {
    if (!t->is_string()) throw LoadError(loc + ": \"t\" must be a string");
    type = t->get<std::string>();
    if (type != "n" && type != "s" && type != "b" && type != "e") {
      throw LoadError(loc + ": unknown cell type \"" + type + "\"");
    }
  }
  if (v == cell.end() || v->is_null()) {
    if (type == "s") return CellValue::text("");
    return CellValue();
  }
  if (type.empty()) {
    if (v->is_number()) type = "n";
    else if (v->is_string()) type = "s";
    else if (v->is_boolean()) type = "b";
    else throw LoadError(loc + ": unsupported value type");
  }
  if (type == "n") {
    if (!v->is_number()) throw LoadError(loc + ": \"v\" must be a number");
    return CellValue::number(v->get<double>());
  }
  if (type == "s") {
    if (!v->is_string()) throw LoadError(loc + ": \"v\" must be a string");
    return CellValue::text(v->get<std::string>());
  }
  if (type == "b") {
    if (!v->is_boolean()) throw LoadError(loc + ": \"v\" must be a boolean");
    return CellValue::boolean(v->get<bool>());
  }
  if (!v->is_string()) throw LoadError(loc + ": error value must be a string");
  auto code = error_from_text(v->get<std::string>());
  if (!code) {
    throw LoadError(loc + ": unknown error code \"" + v->get<std::string>() +
                    "\"");
  }
  return CellValue::error(*code);
}

json encode_number(double d) {
  if (std::isfinite(d) && d == std::trunc(d) && std::fabs(d) < 1e15 &&
      !(d == 0 && std::signbit(d))) {
    return json(static_cast<std::int64_t>(d));
  }
  return json(d);
}

}  // namespace

Workbook load_canonical(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw LoadError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw LoadError("top level must be a JSON object");
  auto sheets = doc.find("sheets");
  if (sheets == doc.end() || !sheets->is_array()) {
    throw LoadError("missing \"sheets\" array");
  }

  detail::WorkbookBuilder builder;
  for (std::size_t si = 0; si < sheets->size(); ++si) {
    const json& s = (*sheets)[si];
    std::string sloc = "sheets[" + std::to_string(si) + "]";
    if (!s.is_object() || !s.contains("name") || !s["name"].is_string()) {
      throw LoadError(sloc + ": sheet needs a string \"name\"");
    }
    std::string name = s["name"].get<std::string>();
    try {
      builder.add_sheet(name);
    } catch (const LoadError& e) {
      throw LoadError(sloc + ": " + e.what());
    }
    auto cells = s.find("cells");
    if (cells == s.end()) continue;
    if (!cells->is_array()) throw LoadError(sloc + ": \"cells\" must be an array");
    for (std::size_t ci = 0; ci < cells->size(); ++ci) {
      const json& c = (*cells)[ci];
      std::string loc = where(si, name, ci);
      if (!c.is_object() || !c.contains("ref") || !c["ref"].is_string()) {
        throw LoadError(loc + ": cell needs a string \"ref\"");
      }
      for (auto& [key, _] : c.items()) {
        if (key != "ref" && key != "v" && key != "t" && key != "f") {
          builder.warn(loc + ": ignored unknown key \"" + key + "\"");
        }
      }
      std::string ref = c["ref"].get<std::string>();
      CellAddress addr;
      try {
        addr = parse_address(ref, name);
      } catch (const AddressError& e) {
        throw LoadError(loc + ": " + e.what());
      }
      if (!iequals(addr.sheet, name)) {
        throw LoadError(loc + ": ref '" + ref + "' names another sheet");
      }
      CellValue value = decode_value(c, loc);
      std::optional<std::string> formula;
      if (auto f = c.find("f"); f != c.end() && !f->is_null()) {
        if (!f->is_string()) throw LoadError(loc + ": \"f\" must be a string");
        formula = f->get<std::string>();
      }
      if (!builder.add_cell(addr, std::move(value), formula)) {
        throw LoadError(loc + ": duplicate cell ref " + ref);
      }
    }
  }
  if (auto fs = doc.find("front_sheet"); fs != doc.end() && !fs->is_null()) {
    if (!fs->is_string()) throw LoadError("\"front_sheet\" must be a string");
    builder.set_front_sheet(fs->get<std::string>());
  }
  return builder.finish();
}

std::string save_canonical(const Workbook& wb) {
  json doc = json::object();
  if (!wb.sheets().empty() && wb.front_sheet() != wb.sheets().front().name()) {
    doc["front_sheet"] = wb.front_sheet();
  }
  json sheets = json::array();
  for (const Sheet& sheet : wb.sheets()) {
    json cells = json::array();
    for (const auto& [pos, cell] : sheet.cells()) {
      json c = json::object();
      c["ref"] = format_address(cell.address);
      const CellValue& v = cell.value;
      if (v.is_number()) {
        c["v"] = encode_number(v.as_number());
      } else if (v.is_text()) {
        c["v"] = v.as_text();
      } else if (v.is_bool()) {
        c["v"] = v.as_bool();
      } else if (v.is_error()) {
        c["v"] = std::string(error_text(v.as_error()));
        c["t"] = "e";
      }
      if (cell.formula) {
        c["f"] = print_formula(cell.formula);
      } else if (!cell.formula_text.empty()) {
        c["f"] = cell.formula_text;
      }
      cells.push_back(std::move(c));
    }
    sheets.push_back(json{{"name", sheet.name()}, {"cells", std::move(cells)}});
  }
  doc["sheets"] = std::move(sheets);
  return doc.dump(2) + "\n";
}

Workbook load_workbook_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string bytes = buf.str();
  std::string ext = path.extension().string();
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(ch));
  if (ext == ".xlsx") {
    return read_xlsx(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
  }
  if (ext == ".json") return load_canonical(bytes);
  throw LoadError("unsupported file type '" + ext + "' (expected .json or .xlsx)");
}

}  // namespace sheetcheck
