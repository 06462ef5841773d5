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

#include "formula_lexer.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "sheetcheck/error.hpp"

namespace sheetcheck::detail {

namespace {

bool word_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         c == '\\' || c == '$';
}

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
         c == '.' || c == '$' || c == '\\';
}

constexpr std::string_view kErrorLiterals[] = {
    "#DIV/0!", "#VALUE!", "#REF!", "#NAME?", "#NUM!", "#CIRC!"};

}  // namespace

std::vector<Token> tokenize(std::string_view s, std::size_t offset) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](TokenKind kind, std::string text, std::size_t col) {
    out.push_back(Token{kind, std::move(text), col + offset});
  };

  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;

    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < s.size() &&
         std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
          ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          while (j < s.size() &&
                 std::isdigit(static_cast<unsigned char>(s[j])))
            ++j;
          i = j;
        }
      }
      // A digit run glued to letters ("1A") is not a number.
      if (i < s.size() && word_char(s[i]) && s[i] != '.') {
        throw ParseError("unexpected character '" + std::string(1, s[i]) +
                             "' after number",
                         i + offset);
      }
      std::string text(s.substr(start, i - start));
      char* end = nullptr;
      double v = std::strtod(text.c_str(), &end);
      Token t{TokenKind::kNumber, text, start + offset};
      t.number = v;
      out.push_back(std::move(t));
      continue;
    }

    if (c == '"') {
      std::string text;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == '"') {
          if (i + 1 < s.size() && s[i + 1] == '"') {
            text.push_back('"');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        text.push_back(s[i++]);
      }
      if (!closed) throw ParseError("unterminated string", start + offset);
      push(TokenKind::kString, std::move(text), start);
      continue;
    }

    if (c == '\'') {
      std::string name;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == '\'') {
          if (i + 1 < s.size() && s[i + 1] == '\'') {
            name.push_back('\'');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        name.push_back(s[i++]);
      }
      if (!closed || i >= s.size() || s[i] != '!' || name.empty()) {
        throw ParseError("malformed quoted sheet name", start + offset);
      }
      ++i;
      push(TokenKind::kSheetPrefix, std::move(name), start);
      continue;
    }

    if (c == '#') {
      bool matched = false;
      for (auto lit : kErrorLiterals) {
        if (s.substr(i, lit.size()) == lit) {
          Token t{TokenKind::kError, std::string(lit), start + offset};
          t.error = *error_from_text(lit);
          out.push_back(std::move(t));
          i += lit.size();
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError("unknown error literal", start + offset);
      continue;
    }

    if (word_start(c)) {
      while (i < s.size() && word_char(s[i])) ++i;
      std::string text(s.substr(start, i - start));
      if (i < s.size() && s[i] == '!') {
        ++i;
        push(TokenKind::kSheetPrefix, std::move(text), start);
      } else {
        push(TokenKind::kWord, std::move(text), start);
      }
      continue;
    }

    switch (c) {
      case '(':
        push(TokenKind::kLParen, "(", start);
        ++i;
        continue;
      case ')':
        push(TokenKind::kRParen, ")", start);
        ++i;
        continue;
      case ',':
        push(TokenKind::kComma, ",", start);
        ++i;
        continue;
      case ':':
        push(TokenKind::kColon, ":", start);
        ++i;
        continue;
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
      case '&':
      case '=':
      case '%':
        push(TokenKind::kOperator, std::string(1, c), start);
        ++i;
        continue;
      case '<':
        if (i + 1 < s.size() && (s[i + 1] == '=' || s[i + 1] == '>')) {
          push(TokenKind::kOperator, std::string(s.substr(i, 2)), start);
          i += 2;
        } else {
          push(TokenKind::kOperator, "<", start);
          ++i;
        }
        continue;
      case '>':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          push(TokenKind::kOperator, ">=", start);
          i += 2;
        } else {
          push(TokenKind::kOperator, ">", start);
          ++i;
        }
        continue;
      default:
        throw ParseError("unknown token '" + std::string(1, c) + "'",
                         start + offset);
    }
  }
  out.push_back(Token{TokenKind::kEnd, "", s.size() + offset});
  return out;
}

}  // namespace sheetcheck::detail
