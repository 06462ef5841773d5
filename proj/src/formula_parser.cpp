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

#include <algorithm>
#include <cctype>
#include <regex>

#include "formula_lexer.hpp"
#include "sheetcheck/error.hpp"
#include "sheetcheck/formula.hpp"

namespace sheetcheck {

namespace {

using detail::Token;
using detail::TokenKind;

std::string to_upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return s;
}

bool looks_like_r1c1(const std::string& word) {
  static const std::regex kR1C1(R"(^[Rr](\[?-?\d*\]?)[Cc](\[?-?\d*\]?)$)");
  return std::regex_match(word, kR1C1);
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string_view sheet)
      : tokens_(std::move(tokens)), sheet_(sheet) {}

  NodePtr parse() {
    NodePtr node = comparison();
    if (peek().kind != TokenKind::kEnd) {
      throw ParseError("unexpected '" + peek().text + "'", peek().column);
    }
    return node;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_operator(std::string_view op) const {
    return peek().kind == TokenKind::kOperator && peek().text == op;
  }
  void expect(TokenKind kind, std::string_view what) {
    if (peek().kind != kind) {
      throw ParseError("expected " + std::string(what), peek().column);
    }
    next();
  }

  NodePtr comparison() {
    NodePtr lhs = concat();
    while (peek().kind == TokenKind::kOperator) {
      const std::string& op = peek().text;
      BinaryOp b;
      if (op == "=") b = BinaryOp::kEq;
      else if (op == "<>") b = BinaryOp::kNe;
      else if (op == "<") b = BinaryOp::kLt;
      else if (op == "<=") b = BinaryOp::kLe;
      else if (op == ">") b = BinaryOp::kGt;
      else if (op == ">=") b = BinaryOp::kGe;
      else break;
      next();
      lhs = make_binary(b, lhs, concat());
    }
    return lhs;
  }

  NodePtr concat() {
    NodePtr lhs = additive();
    while (at_operator("&")) {
      next();
      lhs = make_binary(BinaryOp::kConcat, lhs, additive());
    }
    return lhs;
  }

  NodePtr additive() {
    NodePtr lhs = multiplicative();
    while (at_operator("+") || at_operator("-")) {
      BinaryOp op = next().text == "+" ? BinaryOp::kAdd : BinaryOp::kSub;
      lhs = make_binary(op, lhs, multiplicative());
    }
    return lhs;
  }

  NodePtr multiplicative() {
    NodePtr lhs = power();
    while (at_operator("*") || at_operator("/")) {
      BinaryOp op = next().text == "*" ? BinaryOp::kMul : BinaryOp::kDiv;
      lhs = make_binary(op, lhs, power());
    }
    return lhs;
  }

  // Left-associative, and weaker than unary minus: -2^2 is 4.
  NodePtr power() {
    NodePtr lhs = unary();
    while (at_operator("^")) {
      next();
      lhs = make_binary(BinaryOp::kPow, lhs, unary());
    }
    return lhs;
  }

  NodePtr unary() {
    if (at_operator("-")) {
      next();
      return make_unary(UnaryOp::kNeg, unary());
    }
    if (at_operator("+")) {
      next();
      return unary();
    }
    return postfix();
  }

  NodePtr postfix() {
    NodePtr node = primary();
    while (at_operator("%")) {
      next();
      node = make_unary(UnaryOp::kPercent, node);
    }
    return node;
  }

  NodePtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::kNumber:
        next();
        return make_number(t.number);
      case TokenKind::kString:
        next();
        return make_text(t.text);
      case TokenKind::kError:
        next();
        return make_error(t.error);
      case TokenKind::kLParen: {
        next();
        NodePtr inner = comparison();
        expect(TokenKind::kRParen, "')'");
        return make_paren(inner);
      }
      case TokenKind::kSheetPrefix: {
        std::string sheet = t.text;
        next();
        return reference(sheet, true);
      }
      case TokenKind::kWord:
        return word();
      case TokenKind::kEnd:
        throw ParseError("unexpected end of formula", t.column);
      default:
        throw ParseError("unexpected '" + t.text + "'", t.column);
    }
  }

  NodePtr word() {
    const Token& t = peek();
    std::string text = t.text;
    std::size_t column = t.column;
    if (peek(1).kind == TokenKind::kLParen) {
      NodePtr call = function_call();
      return maybe_range(call, sheet_, false);
    }
    std::string upper = to_upper(text);
    if (upper == "TRUE" || upper == "FALSE") {
      next();
      return make_bool(upper == "TRUE");
    }
    if (is_cell(text) || (is_column(text) &&
                          peek(1).kind == TokenKind::kColon)) {
      return reference(sheet_, false);
    }
    if (looks_like_r1c1(text)) {
      throw ParseError("R1C1 reference '" + text + "' is not supported",
                       column);
    }
    if (text.find('$') != std::string::npos) {
      throw ParseError("invalid reference '" + text + "'", column);
    }
    next();
    if (peek().kind == TokenKind::kColon) {
      throw ParseError("name '" + text + "' cannot start a range", column);
    }
    return make_name(text);
  }

  NodePtr function_call() {
    std::string name = to_upper(next().text);
    expect(TokenKind::kLParen, "'('");
    std::vector<NodePtr> args;
    if (peek().kind == TokenKind::kRParen) {
      next();
      return make_call(name, std::move(args));
    }
    while (true) {
      if (peek().kind == TokenKind::kComma ||
          peek().kind == TokenKind::kRParen) {
        throw ParseError("empty argument", peek().column);
      }
      args.push_back(comparison());
      if (peek().kind == TokenKind::kComma) {
        next();
        continue;
      }
      if (peek().kind == TokenKind::kRParen) {
        next();
        break;
      }
      if (peek().kind == TokenKind::kEnd) {
        throw ParseError("unbalanced parentheses", peek().column);
      }
      throw ParseError("expected ',' or ')'", peek().column);
    }
    return make_call(name, std::move(args));
  }

  static bool is_cell(const std::string& text) {
    try {
      parse_address(text, "_");
      return true;
    } catch (const AddressError&) {
      return false;
    }
  }

  static bool is_column(const std::string& text) {
    std::string_view s = text;
    if (!s.empty() && s.front() == '$') s.remove_prefix(1);
    return column_from_letters(s).has_value();
  }

  // A cell or whole-column reference after an optional sheet prefix.
  NodePtr reference(const std::string& sheet, bool explicit_sheet) {
    const Token& t = peek();
    if (t.kind != TokenKind::kWord) {
      throw ParseError("expected a reference", t.column);
    }
    std::string text = t.text;
    std::size_t column = t.column;
    if (is_column(text) && !is_cell(text) &&
        peek(1).kind == TokenKind::kColon) {
      next();
      next();
      const Token& rhs = peek();
      if (rhs.kind != TokenKind::kWord || !is_column(rhs.text)) {
        throw ParseError("expected a column after ':'", rhs.column);
      }
      std::string end_text = rhs.text;
      next();
      RangeRef r = parse_range(text + ":" + end_text, sheet);
      return no_chain(make_range(r, explicit_sheet));
    }
    if (!is_cell(text)) {
      if (looks_like_r1c1(text)) {
        throw ParseError("R1C1 reference '" + text + "' is not supported",
                         column);
      }
      throw ParseError("invalid reference '" + text + "'", column);
    }
    next();
    if (explicit_sheet && peek().kind == TokenKind::kLParen) {
      throw ParseError("unexpected '('", peek().column);
    }
    NodePtr ref = make_ref(parse_address(text, sheet), explicit_sheet);
    return maybe_range(ref, sheet, explicit_sheet);
  }

  NodePtr maybe_range(NodePtr start, const std::string& sheet,
                      bool /*explicit_sheet*/) {
    if (peek().kind != TokenKind::kColon) return start;
    next();
    NodePtr end;
    const Token& t = peek();
    if (t.kind == TokenKind::kSheetPrefix) {
      std::string end_sheet = t.text;
      next();
      const Token& w = peek();
      if (w.kind != TokenKind::kWord || !is_cell(w.text)) {
        throw ParseError("expected a cell after ':'", w.column);
      }
      end = make_ref(parse_address(w.text, end_sheet), true);
      next();
    } else if (t.kind == TokenKind::kWord &&
               peek(1).kind == TokenKind::kLParen) {
      end = function_call();
    } else if (t.kind == TokenKind::kWord && is_cell(t.text)) {
      // An unqualified end inherits the start's sheet.
      std::string end_sheet = sheet;
      if (auto* r = start->as<ast::Ref>()) end_sheet = r->address.sheet;
      end = make_ref(parse_address(t.text, end_sheet), false);
      next();
    } else {
      throw ParseError("expected a cell or OFFSET/INDEX after ':'", t.column);
    }
    return no_chain(make_range(start, end, false));
  }

  NodePtr no_chain(NodePtr range) {
    if (peek().kind == TokenKind::kColon) {
      throw ParseError("chained ranges are not supported", peek().column);
    }
    return range;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::string sheet_;
};

}  // namespace

NodePtr parse_formula(std::string_view text, std::string_view current_sheet) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
    ++i;
  if (i >= text.size() || text[i] != '=') {
    throw ParseError("formula must begin with '='", i);
  }
  auto tokens = detail::tokenize(text.substr(i + 1), i + 1);
  if (tokens.size() == 1) throw ParseError("empty formula", i + 1);
  Parser parser(std::move(tokens), current_sheet);
  return parser.parse();
}

}  // namespace sheetcheck
