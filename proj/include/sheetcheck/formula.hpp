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

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sheetcheck/address.hpp"
#include "sheetcheck/value.hpp"

namespace sheetcheck {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class UnaryOp { kNeg, kPercent };

enum class BinaryOp {
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kConcat,
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
};

namespace ast {

struct NumberLit {
  double value;
};
struct TextLit {
  std::string value;
};
struct BoolLit {
  bool value;
};
struct ErrorLit {
  ErrorCode code;
};
// sheet_explicit records whether the source spelled out "Sheet!".
struct Ref {
  CellAddress address;
  bool sheet_explicit = false;
};
// Endpoints are Ref or Call nodes. A Call endpoint (OFFSET/INDEX) makes the
// range dynamic: its extent is only known at evaluation time.
struct Range {
  NodePtr start;
  NodePtr end;
  bool whole_column = false;
};
// Defined name or other identifier the evaluator cannot resolve.
struct Name {
  std::string name;
};
struct Unary {
  UnaryOp op;
  NodePtr child;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  std::string name;  // always uppercase
  std::vector<NodePtr> args;
};
struct Paren {
  NodePtr child;
};

}  // namespace ast

struct Node {
  using Variant =
      std::variant<ast::NumberLit, ast::TextLit, ast::BoolLit, ast::ErrorLit,
                   ast::Ref, ast::Range, ast::Name, ast::Unary, ast::Binary,
                   ast::Call, ast::Paren>;
  Variant v;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&v);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(v);
  }
};

NodePtr make_number(double v);
NodePtr make_text(std::string v);
NodePtr make_bool(bool v);
NodePtr make_error(ErrorCode e);
NodePtr make_ref(CellAddress a, bool sheet_explicit = false);
NodePtr make_range(NodePtr start, NodePtr end, bool whole_column = false);
NodePtr make_range(const RangeRef& r, bool sheet_explicit = false);
NodePtr make_name(std::string name);
NodePtr make_unary(UnaryOp op, NodePtr child);
NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs);
NodePtr make_call(std::string name, std::vector<NodePtr> args);
NodePtr make_paren(NodePtr child);

std::string_view binary_op_text(BinaryOp op);
bool is_comparison(BinaryOp op);
bool is_arithmetic(BinaryOp op);

// Parses a formula ("=..."). Locale is fixed: '.' decimal separator, ','
// argument separator. Unqualified references resolve to current_sheet.
// Throws ParseError with the 0-based column of the offending token.
NodePtr parse_formula(std::string_view text, std::string_view current_sheet);

// Deterministic text with a leading '='. Inserts the parentheses precedence
// requires and keeps explicit Paren nodes.
std::string print_formula(const NodePtr& node);

// Exact tree equality, Paren nodes included.
bool structurally_equal(const NodePtr& a, const NodePtr& b);

// Wraps children in Paren wherever printing would otherwise need to add
// parentheses. parse(print(x)) is structurally equal to this.
NodePtr with_required_parens(const NodePtr& node);

struct RefSet {
  std::set<CellAddress> cells;
  std::set<RangeRef> ranges;
  // Range nodes with at least one OFFSET/INDEX endpoint.
  std::vector<NodePtr> dynamic;
};

RefSet extract_references(const NodePtr& node);

// Static extent of a Range node; nullopt when an endpoint is dynamic.
std::optional<RangeRef> static_range(const ast::Range& range);

// Strips Paren wrappers.
const Node& unwrap(const Node& node);

// Name of the call at the root (ignoring parentheses), or empty.
std::string root_call_name(const NodePtr& node);

// Moves every relative reference by (drows, dcols). References pushed off
// the grid become #REF! literals. Used to expand shared formulas.
NodePtr shift_relative(const NodePtr& node, int drows, int dcols);

enum class AstFormat { kText, kJson };
std::string dump_ast(const NodePtr& node, AstFormat format);

}  // namespace sheetcheck
