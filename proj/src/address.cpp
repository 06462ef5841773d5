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

#include "sheetcheck/address.hpp"

#include <cctype>

#include "sheetcheck/error.hpp"

namespace sheetcheck {

namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

// Splits "Sheet!A1" / "'My sheet'!A1" into sheet and remainder. Returns the
// remainder unchanged and leaves sheet empty when there is no prefix.
std::string_view split_sheet(std::string_view text, std::string& sheet) {
  if (!text.empty() && text.front() == '\'') {
    std::string name;
    std::size_t i = 1;
    for (; i < text.size(); ++i) {
      if (text[i] == '\'') {
        if (i + 1 < text.size() && text[i + 1] == '\'') {
          name.push_back('\'');
          ++i;
          continue;
        }
        break;
      }
      name.push_back(text[i]);
    }
    if (i >= text.size() || i + 1 >= text.size() || text[i + 1] != '!' ||
        name.empty()) {
      throw AddressError("malformed quoted sheet name in '" +
                         std::string(text) + "'");
    }
    sheet = std::move(name);
    return text.substr(i + 2);
  }
  auto bang = text.find('!');
  if (bang == std::string_view::npos) return text;
  if (bang == 0) throw AddressError("empty sheet name in '" +
                                    std::string(text) + "'");
  sheet = std::string(text.substr(0, bang));
  return text.substr(bang + 1);
}

struct CellPart {
  int col = 0;
  int row = 0;
  bool col_abs = false;
  bool row_abs = false;
};

// Accepts $?LETTERS$?DIGITS. Returns nullopt when the token does not match.
std::optional<CellPart> match_cell(std::string_view s) {
  CellPart p;
  std::size_t i = 0;
  if (i < s.size() && s[i] == '$') {
    p.col_abs = true;
    ++i;
  }
  std::size_t letters_begin = i;
  while (i < s.size() && is_alpha(s[i])) ++i;
  auto col = column_from_letters(s.substr(letters_begin, i - letters_begin));
  if (!col) return std::nullopt;
  if (i < s.size() && s[i] == '$') {
    p.row_abs = true;
    ++i;
  }
  std::size_t digits_begin = i;
  while (i < s.size() && is_digit(s[i])) ++i;
  if (i != s.size() || digits_begin == i || s[digits_begin] == '0' ||
      i - digits_begin > 7) {
    return std::nullopt;
  }
  int row = std::stoi(std::string(s.substr(digits_begin)));
  if (row > kMaxRow) return std::nullopt;
  p.col = *col;
  p.row = row;
  return p;
}

// $?LETTERS only, used by whole-column ranges.
std::optional<std::pair<int, bool>> match_column(std::string_view s) {
  bool abs = false;
  if (!s.empty() && s.front() == '$') {
    abs = true;
    s.remove_prefix(1);
  }
  auto col = column_from_letters(s);
  if (!col) return std::nullopt;
  return std::make_pair(*col, abs);
}

}  // namespace

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::optional<int> column_from_letters(std::string_view letters) {
  if (letters.empty() || letters.size() > 3) return std::nullopt;
  int col = 0;
  for (char c : letters) {
    if (!is_alpha(c)) return std::nullopt;
    col = col * 26 + (std::toupper(static_cast<unsigned char>(c)) - 'A' + 1);
  }
  if (col > kMaxCol) return std::nullopt;
  return col;
}

std::string column_letters(int col) {
  std::string out;
  while (col > 0) {
    int rem = (col - 1) % 26;
    out.insert(out.begin(), static_cast<char>('A' + rem));
    col = (col - 1) / 26;
  }
  return out;
}

bool RangeRef::contains(const CellAddress& a) const {
  return a.sheet == start.sheet && a.col >= start.col && a.col <= end.col &&
         a.row >= start.row && a.row <= end.row;
}

bool RangeRef::contains(const RangeRef& r) const {
  return contains(r.start) && contains(r.end);
}

CellAddress parse_address(std::string_view text,
                          std::string_view current_sheet) {
  std::string sheet;
  std::string_view rest = split_sheet(text, sheet);
  auto cell = match_cell(rest);
  if (!cell) {
    throw AddressError("invalid cell reference '" + std::string(rest) + "'");
  }
  CellAddress a;
  a.sheet = sheet.empty() ? std::string(current_sheet) : sheet;
  a.col = cell->col;
  a.row = cell->row;
  a.col_absolute = cell->col_abs;
  a.row_absolute = cell->row_abs;
  return a;
}

RangeRef parse_range(std::string_view text, std::string_view current_sheet) {
  std::string sheet;
  std::string_view rest = split_sheet(text, sheet);
  std::string sheet_name = sheet.empty() ? std::string(current_sheet) : sheet;
  auto colon = rest.find(':');
  RangeRef r;
  if (colon == std::string_view::npos) {
    r.start = parse_address(rest, sheet_name);
    r.end = r.start;
    return r;
  }
  std::string_view lhs = rest.substr(0, colon);
  std::string_view rhs = rest.substr(colon + 1);
  if (auto c1 = match_column(lhs)) {
    auto c2 = match_column(rhs);
    if (!c2) {
      throw AddressError("invalid column range end '" + std::string(rhs) +
                         "'");
    }
    r.whole_column = true;
    r.start = CellAddress{sheet_name, std::min(c1->first, c2->first), 1,
                          c1->second, false};
    r.end = CellAddress{sheet_name, std::max(c1->first, c2->first), kMaxRow,
                        c2->second, false};
    return r;
  }
  CellAddress a = parse_address(lhs, sheet_name);
  CellAddress b = parse_address(rhs, sheet_name);
  if (b.col < a.col) std::swap(a.col, b.col);
  if (b.row < a.row) std::swap(a.row, b.row);
  r.start = a;
  r.end = b;
  return r;
}

std::string quote_sheet_name(std::string_view name) {
  bool plain = !name.empty() && (is_alpha(name[0]) || name[0] == '_');
  for (char c : name) {
    if (!(is_alpha(c) || is_digit(c) || c == '_' || c == '.')) plain = false;
  }
  // Names that read as a cell reference must be quoted too.
  if (plain && match_cell(name)) plain = false;
  if (plain && (name.front() == 'R' || name.front() == 'r' ||
                name.front() == 'C' || name.front() == 'c')) {
    bool rc = true;
    for (char c : name) {
      if (!(is_digit(c) || c == 'R' || c == 'C' || c == 'r' || c == 'c')) {
        rc = false;
      }
    }
    if (rc) plain = false;
  }
  if (plain) return std::string(name);
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string format_address(const CellAddress& a, bool qualify) {
  std::string out;
  if (qualify) out = quote_sheet_name(a.sheet) + "!";
  if (a.col_absolute) out.push_back('$');
  out += column_letters(a.col);
  if (a.row_absolute) out.push_back('$');
  out += std::to_string(a.row);
  return out;
}

std::string format_range(const RangeRef& r, bool qualify) {
  std::string out;
  if (qualify) out = quote_sheet_name(r.start.sheet) + "!";
  if (r.whole_column) {
    out += (r.start.col_absolute ? "$" : "") + column_letters(r.start.col) +
           ":" + (r.end.col_absolute ? "$" : "") + column_letters(r.end.col);
    return out;
  }
  if (r.start == r.end) return out + format_address(r.start);
  return out + format_address(r.start) + ":" + format_address(r.end);
}

}  // namespace sheetcheck
