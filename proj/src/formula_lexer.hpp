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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sheetcheck/value.hpp"

namespace sheetcheck::detail {

enum class TokenKind {
  kNumber,
  kString,
  kWord,         // identifiers, cell references, column letters
  kSheetPrefix,  // "Sheet!" or "'My sheet'!" (text holds the bare name)
  kError,        // "#REF!" etc.
  kLParen,
  kRParen,
  kComma,
  kColon,
  kOperator,
  kEnd,
};

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t column;
  double number = 0;
  ErrorCode error = ErrorCode::kValue;
};

// Tokenizes the formula body. offset is added to every column so errors
// point into the original text (which starts with '=').
std::vector<Token> tokenize(std::string_view body, std::size_t offset);

}  // namespace sheetcheck::detail
