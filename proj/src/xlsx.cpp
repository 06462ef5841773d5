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

#include <expat.h>

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "sheetcheck/error.hpp"
#include "sheetcheck/io.hpp"
#include "workbook_builder.hpp"
#include "zip_reader.hpp"

namespace sheetcheck {

namespace {

// Small element tree built from expat events. Element names drop their
// namespace prefix; attribute names keep it.
struct XmlElement {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::vector<std::unique_ptr<XmlElement>> children;
  std::string text;

  const std::string* attr(std::string_view key) const {
    for (auto& [k, v] : attrs) {
      std::string_view local = k;
      if (auto colon = local.find(':'); colon != std::string_view::npos) {
        local = local.substr(colon + 1);
      }
      if (k == key || local == key) return &v;
    }
    return nullptr;
  }

  const XmlElement* child(std::string_view n) const {
    for (auto& c : children) {
      if (c->name == n) return c.get();
    }
    return nullptr;
  }
};

std::string local_name(const char* qname) {
  std::string_view s = qname;
  if (auto colon = s.find(':'); colon != std::string_view::npos) {
    s = s.substr(colon + 1);
  }
  return std::string(s);
}

class XmlTreeBuilder {
 public:
  std::unique_ptr<XmlElement> parse(const std::string& data,
                                    const std::string& part) {
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate(nullptr), &XML_ParserFree);
    XML_SetUserData(parser.get(), this);
    XML_SetElementHandler(parser.get(), &XmlTreeBuilder::on_start,
                          &XmlTreeBuilder::on_end);
    XML_SetCharacterDataHandler(parser.get(), &XmlTreeBuilder::on_text);
    if (XML_Parse(parser.get(), data.data(), static_cast<int>(data.size()),
                  XML_TRUE) == XML_STATUS_ERROR) {
      throw IngestError(
          "malformed XML in '" + part + "' at line " +
          std::to_string(XML_GetCurrentLineNumber(parser.get())) + ": " +
          XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
    if (!root_) throw IngestError("empty XML part '" + part + "'");
    return std::move(root_);
  }

 private:
  static void on_start(void* self_ptr, const XML_Char* name,
                       const XML_Char** atts) {
    auto* self = static_cast<XmlTreeBuilder*>(self_ptr);
    auto el = std::make_unique<XmlElement>();
    el->name = local_name(name);
    for (int i = 0; atts[i]; i += 2) el->attrs[atts[i]] = atts[i + 1];
    XmlElement* raw = el.get();
    if (self->stack_.empty()) {
      self->root_ = std::move(el);
    } else {
      self->stack_.back()->children.push_back(std::move(el));
    }
    self->stack_.push_back(raw);
  }
  static void on_end(void* self_ptr, const XML_Char*) {
    static_cast<XmlTreeBuilder*>(self_ptr)->stack_.pop_back();
  }
  static void on_text(void* self_ptr, const XML_Char* s, int len) {
    auto* self = static_cast<XmlTreeBuilder*>(self_ptr);
    if (!self->stack_.empty()) self->stack_.back()->text.append(s, len);
  }

  std::unique_ptr<XmlElement> root_;
  std::vector<XmlElement*> stack_;
};

std::unique_ptr<XmlElement> parse_part(const detail::ZipReader& zip,
                                       const std::string& part) {
  return XmlTreeBuilder().parse(zip.read(part), part);
}

// Concatenated <t> text of a string item, skipping phonetic runs.
std::string string_item_text(const XmlElement& si) {
  std::string out;
  for (auto& c : si.children) {
    if (c->name == "t") {
      out += c->text;
    } else if (c->name == "r") {
      if (auto* t = c->child("t")) out += t->text;
    }
  }
  return out;
}

std::string resolve_target(const std::string& target) {
  if (!target.empty() && target.front() == '/') return target.substr(1);
  std::string t = target;
  std::string base = "xl/";
  while (t.rfind("../", 0) == 0) {
    t = t.substr(3);
    base.clear();
  }
  return base + t;
}

struct SharedMaster {
  CellAddress at;
  NodePtr formula;
};

class XlsxIngester {
 public:
  explicit XlsxIngester(std::span<const std::uint8_t> bytes) : zip_(bytes) {}

  Workbook run() {
    if (!zip_.contains("xl/workbook.xml")) {
      throw IngestError("missing part 'xl/workbook.xml'");
    }
    report_skipped_parts();
    load_shared_strings();
    auto rels = load_relationships();

    auto workbook = parse_part(zip_, "xl/workbook.xml");
    if (workbook->child("definedNames")) {
      builder_.warn("defined names are not supported; cells using them "
                    "evaluate to #NAME?");
    }
    const XmlElement* sheets = workbook->child("sheets");
    if (!sheets) throw IngestError("xl/workbook.xml has no <sheets>");

    std::size_t index = 0;
    for (auto& s : sheets->children) {
      if (s->name != "sheet") continue;
      ++index;
      const std::string* name = s->attr("name");
      if (!name) throw IngestError("<sheet> without a name");
      std::string part = "xl/worksheets/sheet" + std::to_string(index) +
                         ".xml";
      if (const std::string* rid = s->attr("r:id")) {
        auto it = rels.find(*rid);
        if (it != rels.end()) part = it->second;
      }
      if (part.find("worksheets/") == std::string::npos) {
        builder_.warn("sheet '" + *name + "' is not a worksheet; skipped");
        continue;
      }
      builder_.add_sheet(*name);
      load_worksheet(*name, part);
    }
    return builder_.finish();
  }

 private:
  void report_skipped_parts() {
    std::set<std::string> kinds;
    for (auto& [name, _] : zip_.entries()) {
      if (name == "xl/styles.xml") kinds.insert("styles");
      if (name.rfind("xl/charts/", 0) == 0) kinds.insert("charts");
      if (name.rfind("xl/drawings/", 0) == 0) kinds.insert("drawings");
      if (name.rfind("xl/pivotTables/", 0) == 0) kinds.insert("pivot tables");
      if (name.rfind("xl/externalLinks/", 0) == 0) {
        kinds.insert("external links");
      }
      if (name.rfind("xl/vbaProject", 0) == 0) kinds.insert("VBA");
    }
    if (kinds.empty()) return;
    std::string list;
    for (auto& k : kinds) list += (list.empty() ? "" : ", ") + k;
    builder_.warn("skipped unsupported parts: " + list);
  }

  void load_shared_strings() {
    if (!zip_.contains("xl/sharedStrings.xml")) return;
    auto sst = parse_part(zip_, "xl/sharedStrings.xml");
    for (auto& si : sst->children) {
      if (si->name == "si") shared_.push_back(string_item_text(*si));
    }
    have_shared_ = true;
  }

  std::map<std::string, std::string> load_relationships() {
    std::map<std::string, std::string> out;
    const std::string part = "xl/_rels/workbook.xml.rels";
    if (!zip_.contains(part)) return out;
    auto rels = parse_part(zip_, part);
    for (auto& r : rels->children) {
      const std::string* id = r->attr("Id");
      const std::string* target = r->attr("Target");
      if (id && target) out[*id] = resolve_target(*target);
    }
    return out;
  }

  void load_worksheet(const std::string& sheet, const std::string& part) {
    auto ws = parse_part(zip_, part);
    const XmlElement* data = ws->child("sheetData");
    if (!data) return;
    masters_.clear();
    int row_number = 0;
    for (auto& row : data->children) {
      if (row->name != "row") continue;
      if (const std::string* r = row->attr("r")) {
        row_number = std::stoi(*r);
      } else {
        ++row_number;
      }
      int col_number = 0;
      for (auto& c : row->children) {
        if (c->name != "c") continue;
        CellAddress at{sheet, col_number + 1, row_number};
        if (const std::string* r = c->attr("r")) {
          try {
            at = parse_address(*r, sheet);
          } catch (const AddressError& e) {
            throw IngestError(part + ": " + e.what());
          }
        }
        col_number = at.col;
        load_cell(at, *c, part);
      }
    }
  }

  CellValue decode_value(const CellAddress& at, const XmlElement& c,
                         const std::string& part) {
    const std::string* type = c.attr("t");
    const XmlElement* v = c.child("v");
    std::string t = type ? *type : "n";
    std::string where = format_address(at, true);
    if (t == "inlineStr") {
      const XmlElement* is = c.child("is");
      return CellValue::text(is ? string_item_text(*is) : "");
    }
    if (!v) return t == "str" ? CellValue::text("") : CellValue();
    const std::string& raw = v->text;
    if (t == "n") {
      if (auto d = parse_numeric_text(raw)) return CellValue::number(*d);
      throw IngestError(part + ": bad number '" + raw + "' at " + where);
    }
    if (t == "s") {
      if (!have_shared_) {
        throw IngestError("missing part 'xl/sharedStrings.xml' needed by " +
                          where);
      }
      std::size_t idx = 0;
      try {
        idx = std::stoul(raw);
      } catch (const std::exception&) {
        throw IngestError(part + ": bad shared string index at " + where);
      }
      if (idx >= shared_.size()) {
        throw IngestError(part + ": shared string index " + raw +
                          " out of range at " + where);
      }
      return CellValue::text(shared_[idx]);
    }
    if (t == "str") return CellValue::text(raw);
    if (t == "b") return CellValue::boolean(raw == "1" || raw == "true");
    if (t == "e") {
      if (auto code = error_from_text(raw)) return CellValue::error(*code);
      builder_.warn(where + ": error value " + raw +
                    " is outside the supported set; stored as #VALUE!");
      return CellValue::error(ErrorCode::kValue);
    }
    builder_.warn(where + ": unknown cell type '" + t + "'; treated as text");
    return CellValue::text(raw);
  }

  void load_cell(const CellAddress& at, const XmlElement& c,
                 const std::string& part) {
    CellValue value = decode_value(at, c, part);
    const XmlElement* f = c.child("f");
    std::string where = format_address(at, true);
    if (!f) {
      builder_.add_cell(at, std::move(value), std::nullopt);
      return;
    }
    const std::string* ftype = f->attr("t");
    if (ftype && (*ftype == "array" || *ftype == "dataTable")) {
      builder_.warn(where + ": " + *ftype +
                    " formulas are not supported; cell evaluates to #NAME?");
      builder_.add_cell(at, CellValue::error(ErrorCode::kName), std::nullopt);
      return;
    }
    if (ftype && *ftype == "shared") {
      const std::string* si = f->attr("si");
      if (!si) throw IngestError(part + ": shared formula without si at " + where);
      if (!f->text.empty()) {
        std::string text = "=" + f->text;
        builder_.add_cell(at, std::move(value), text);
        try {
          masters_[*si] = SharedMaster{at, parse_formula(text, at.sheet)};
        } catch (const ParseError&) {
          masters_[*si] = SharedMaster{at, nullptr};
        }
        return;
      }
      auto it = masters_.find(*si);
      if (it == masters_.end()) {
        throw IngestError(part + ": shared formula " + *si +
                          " used before its definition at " + where);
      }
      if (!it->second.formula) {
        builder_.add_cell(at, CellValue::error(ErrorCode::kName),
                          std::nullopt);
        return;
      }
      NodePtr shifted = shift_relative(it->second.formula,
                                       at.row - it->second.at.row,
                                       at.col - it->second.at.col);
      builder_.add_parsed_cell(at, std::move(value), shifted,
                               print_formula(shifted));
      return;
    }
    builder_.add_cell(at, std::move(value), "=" + f->text);
  }

  detail::ZipReader zip_;
  detail::WorkbookBuilder builder_;
  std::vector<std::string> shared_;
  bool have_shared_ = false;
  std::map<std::string, SharedMaster> masters_;
};

}  // namespace

Workbook read_xlsx(std::span<const std::uint8_t> bytes) {
  return XlsxIngester(bytes).run();
}

}  // namespace sheetcheck
