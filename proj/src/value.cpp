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

#include "sheetcheck/value.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace sheetcheck {

std::string_view error_text(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDiv0:
      return "#DIV/0!";
    case ErrorCode::kValue:
      return "#VALUE!";
    case ErrorCode::kRef:
      return "#REF!";
    case ErrorCode::kName:
      return "#NAME?";
    case ErrorCode::kNum:
      return "#NUM!";
    case ErrorCode::kCirc:
      return "#CIRC!";
  }
  return "#VALUE!";
}

std::optional<ErrorCode> error_from_text(std::string_view text) {
  for (auto code : {ErrorCode::kDiv0, ErrorCode::kValue, ErrorCode::kRef,
                    ErrorCode::kName, ErrorCode::kNum, ErrorCode::kCirc}) {
    if (error_text(code) == text) return code;
  }
  return std::nullopt;
}

bool operator==(const CellValue& a, const CellValue& b) {
  if (a.is_number() && b.is_number()) {
    return std::bit_cast<unsigned long long>(a.as_number()) ==
           std::bit_cast<unsigned long long>(b.as_number());
  }
  return a.v_ == b.v_;
}

std::string_view CellValue::type_name() const {
  switch (v_.index()) {
    case 0:
      return "blank";
    case 1:
      return "number";
    case 2:
      return "text";
    case 3:
      return "bool";
    default:
      return "error";
  }
}

std::string format_general(double v) {
  if (v == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string display_text(const CellValue& v) {
  if (v.is_blank()) return "";
  if (v.is_number()) return format_general(v.as_number());
  if (v.is_text()) return v.as_text();
  if (v.is_bool()) return v.as_bool() ? "TRUE" : "FALSE";
  return std::string(error_text(v.as_error()));
}

std::optional<double> parse_numeric_text(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.remove_suffix(1);
    return s;
  };
  std::string_view s = trim(text);
  if (s.empty()) return std::nullopt;

  bool negative = false;
  bool parens = false;
  if (s.front() == '(' && s.back() == ')') {
    parens = true;
    negative = true;
    s = trim(s.substr(1, s.size() - 2));
  }
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    if (parens) return std::nullopt;
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!s.empty() && s.front() == '$') s.remove_prefix(1);
  bool percent = false;
  if (!s.empty() && s.back() == '%') {
    percent = true;
    s.remove_suffix(1);
  }
  if (s.empty()) return std::nullopt;

  // Integer part with optional well-formed thousands grouping.
  std::string digits;
  std::size_t i = 0;
  std::size_t group = 0;
  bool grouped = false;
  bool first_group = true;
  while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) ||
                          s[i] == ',')) {
    if (s[i] == ',') {
      if (group == 0 || (first_group && group > 3) ||
          (!first_group && group != 3)) {
        return std::nullopt;
      }
      first_group = false;
      grouped = true;
      group = 0;
    } else {
      digits.push_back(s[i]);
      ++group;
    }
    ++i;
  }
  if (grouped && group != 3) return std::nullopt;
  std::string rest(s.substr(i));
  std::string number = digits;
  if (!rest.empty() && rest.front() == '.') {
    std::size_t j = 1;
    while (j < rest.size() && std::isdigit(static_cast<unsigned char>(rest[j])))
      ++j;
    number += rest.substr(0, j);
    rest = rest.substr(j);
  }
  if (number.empty() || number == ".") return std::nullopt;
  if (!rest.empty() && (rest.front() == 'e' || rest.front() == 'E')) {
    std::size_t j = 1;
    if (j < rest.size() && (rest[j] == '+' || rest[j] == '-')) ++j;
    std::size_t exp_digits = j;
    while (j < rest.size() && std::isdigit(static_cast<unsigned char>(rest[j])))
      ++j;
    if (j == exp_digits) return std::nullopt;
    number += rest.substr(0, j);
    rest = rest.substr(j);
  }
  if (!rest.empty()) return std::nullopt;

  double value = 0;
  auto res = std::from_chars(number.data(), number.data() + number.size(),
                             value);
  if (res.ec != std::errc() || res.ptr != number.data() + number.size()) {
    // from_chars rejects a leading '.', which is a valid spelling here.
    char* end = nullptr;
    value = std::strtod(number.c_str(), &end);
    if (end != number.c_str() + number.size()) return std::nullopt;
  }
  if (percent) value /= 100.0;
  if (negative) value = -value;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace sheetcheck
