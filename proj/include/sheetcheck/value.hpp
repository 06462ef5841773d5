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
#include <string_view>
#include <variant>

namespace sheetcheck {

enum class ErrorCode { kDiv0, kValue, kRef, kName, kNum, kCirc };

std::string_view error_text(ErrorCode code);
std::optional<ErrorCode> error_from_text(std::string_view text);

struct Blank {
  friend bool operator==(Blank, Blank) { return true; }
};

// Value held by (or computed for) a cell. Blank is distinct from both
// Number(0) and Text("").
class CellValue {
 public:
  using Storage = std::variant<Blank, double, std::string, bool, ErrorCode>;

  CellValue() = default;
  static CellValue number(double v) { return CellValue(Storage(v)); }
  static CellValue text(std::string v) {
    return CellValue(Storage(std::move(v)));
  }
  static CellValue boolean(bool v) { return CellValue(Storage(v)); }
  static CellValue error(ErrorCode e) { return CellValue(Storage(e)); }

  bool is_blank() const { return std::holds_alternative<Blank>(v_); }
  bool is_number() const { return std::holds_alternative<double>(v_); }
  bool is_text() const { return std::holds_alternative<std::string>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_error() const { return std::holds_alternative<ErrorCode>(v_); }

  double as_number() const { return std::get<double>(v_); }
  const std::string& as_text() const { return std::get<std::string>(v_); }
  bool as_bool() const { return std::get<bool>(v_); }
  ErrorCode as_error() const { return std::get<ErrorCode>(v_); }

  const Storage& storage() const { return v_; }

  // Bitwise equality for numbers so determinism checks can compare runs.
  friend bool operator==(const CellValue& a, const CellValue& b);

  // Short type tag: "blank", "number", "text", "bool", "error".
  std::string_view type_name() const;

 private:
  explicit CellValue(Storage v) : v_(std::move(v)) {}
  Storage v_;
};

// Display form used for eval output and text concatenation: numbers with up
// to 15 significant digits, TRUE/FALSE, error codes verbatim.
std::string display_text(const CellValue& v);
std::string format_general(double v);

// Text-to-number coercion used by arithmetic operators. Accepts an optional
// sign, "$", thousands separators, a decimal part, an exponent, a trailing
// "%" and accounting parentheses. Returns nullopt for anything else.
std::optional<double> parse_numeric_text(std::string_view text);

}  // namespace sheetcheck
