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

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "sheetcheck/formula.hpp"

namespace sheetcheck {

namespace {

template <typename T>
NodePtr make(T value) {
  return std::make_shared<const Node>(Node{Node::Variant(std::move(value))});
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Binding strength, weakest first. Primaries bind tightest.
enum Prec {
  kComparison = 1,
  kConcat,
  kAdditive,
  kMultiplicative,
  kPower,
  kNegation,
  kPercent,
  kPrimary,
};

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd:
    case BinaryOp::kSub:
      return kAdditive;
    case BinaryOp::kMul:
    case BinaryOp::kDiv:
      return kMultiplicative;
    case BinaryOp::kPow:
      return kPower;
    case BinaryOp::kConcat:
      return kConcat;
    default:
      return kComparison;
  }
}

int precedence(const Node& n) {
  if (auto* b = n.as<ast::Binary>()) return precedence(b->op);
  if (auto* u = n.as<ast::Unary>()) {
    return u->op == UnaryOp::kNeg ? kNegation : kPercent;
  }
  if (auto* num = n.as<ast::NumberLit>()) {
    if (std::signbit(num->value)) return kNegation;
  }
  return kPrimary;
}

NodePtr wrap_if(NodePtr child, bool needed) {
  return needed ? make_paren(std::move(child)) : child;
}

std::string number_text(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print(const Node& node, std::string& out) {
  std::visit(
      overloaded{
          [&](const ast::NumberLit& n) { out += number_text(n.value); },
          [&](const ast::TextLit& t) {
            out.push_back('"');
            for (char c : t.value) {
              if (c == '"') out.push_back('"');
              out.push_back(c);
            }
            out.push_back('"');
          },
          [&](const ast::BoolLit& b) { out += b.value ? "TRUE" : "FALSE"; },
          [&](const ast::ErrorLit& e) { out += error_text(e.code); },
          [&](const ast::Ref& r) {
            out += format_address(r.address, r.sheet_explicit);
          },
          [&](const ast::Range& r) {
            if (r.whole_column) {
              auto* s = r.start->as<ast::Ref>();
              auto* e = r.end->as<ast::Ref>();
              if (s->sheet_explicit) {
                out += quote_sheet_name(s->address.sheet) + "!";
              }
              if (s->address.col_absolute) out.push_back('$');
              out += column_letters(s->address.col) + ":";
              if (e->address.col_absolute) out.push_back('$');
              out += column_letters(e->address.col);
              return;
            }
            print(*r.start, out);
            out.push_back(':');
            print(*r.end, out);
          },
          [&](const ast::Name& n) { out += n.name; },
          [&](const ast::Unary& u) {
            if (u.op == UnaryOp::kNeg) {
              out.push_back('-');
              print(*u.child, out);
            } else {
              print(*u.child, out);
              out.push_back('%');
            }
          },
          [&](const ast::Binary& b) {
            print(*b.lhs, out);
            out += binary_op_text(b.op);
            print(*b.rhs, out);
          },
          [&](const ast::Call& c) {
            out += c.name;
            out.push_back('(');
            for (std::size_t i = 0; i < c.args.size(); ++i) {
              if (i) out.push_back(',');
              print(*c.args[i], out);
            }
            out.push_back(')');
          },
          [&](const ast::Paren& p) {
            out.push_back('(');
            print(*p.child, out);
            out.push_back(')');
          },
      },
      node.v);
}

bool equal(const Node& a, const Node& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      overloaded{
          [&](const ast::NumberLit& x) {
            auto& y = std::get<ast::NumberLit>(b.v);
            return x.value == y.value &&
                   std::signbit(x.value) == std::signbit(y.value);
          },
          [&](const ast::TextLit& x) {
            return x.value == std::get<ast::TextLit>(b.v).value;
          },
          [&](const ast::BoolLit& x) {
            return x.value == std::get<ast::BoolLit>(b.v).value;
          },
          [&](const ast::ErrorLit& x) {
            return x.code == std::get<ast::ErrorLit>(b.v).code;
          },
          [&](const ast::Ref& x) {
            auto& y = std::get<ast::Ref>(b.v);
            return x.address == y.address &&
                   x.address.col_absolute == y.address.col_absolute &&
                   x.address.row_absolute == y.address.row_absolute &&
                   x.sheet_explicit == y.sheet_explicit;
          },
          [&](const ast::Range& x) {
            auto& y = std::get<ast::Range>(b.v);
            return x.whole_column == y.whole_column &&
                   equal(*x.start, *y.start) && equal(*x.end, *y.end);
          },
          [&](const ast::Name& x) {
            return x.name == std::get<ast::Name>(b.v).name;
          },
          [&](const ast::Unary& x) {
            auto& y = std::get<ast::Unary>(b.v);
            return x.op == y.op && equal(*x.child, *y.child);
          },
          [&](const ast::Binary& x) {
            auto& y = std::get<ast::Binary>(b.v);
            return x.op == y.op && equal(*x.lhs, *y.lhs) &&
                   equal(*x.rhs, *y.rhs);
          },
          [&](const ast::Call& x) {
            auto& y = std::get<ast::Call>(b.v);
            if (x.name != y.name || x.args.size() != y.args.size()) {
              return false;
            }
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              if (!equal(*x.args[i], *y.args[i])) return false;
            }
            return true;
          },
          [&](const ast::Paren& x) {
            return equal(*x.child, *std::get<ast::Paren>(b.v).child);
          },
      },
      a.v);
}

nlohmann::json to_json(const Node& node) {
  using nlohmann::json;
  return std::visit(
      overloaded{
          [](const ast::NumberLit& n) -> json {
            return {{"node", "number"}, {"value", n.value}};
          },
          [](const ast::TextLit& t) -> json {
            return {{"node", "text"}, {"value", t.value}};
          },
          [](const ast::BoolLit& b) -> json {
            return {{"node", "bool"}, {"value", b.value}};
          },
          [](const ast::ErrorLit& e) -> json {
            return {{"node", "error"}, {"value", error_text(e.code)}};
          },
          [](const ast::Ref& r) -> json {
            return {{"node", "ref"},
                    {"ref", format_address(r.address, true)}};
          },
          [](const ast::Range& r) -> json {
            return {{"node", "range"},
                    {"whole_column", r.whole_column},
                    {"start", to_json(*r.start)},
                    {"end", to_json(*r.end)}};
          },
          [](const ast::Name& n) -> json {
            return {{"node", "name"}, {"name", n.name}};
          },
          [](const ast::Unary& u) -> json {
            return {{"node", "unary"},
                    {"op", u.op == UnaryOp::kNeg ? "-" : "%"},
                    {"child", to_json(*u.child)}};
          },
          [](const ast::Binary& b) -> json {
            return {{"node", "binary"},
                    {"op", binary_op_text(b.op)},
                    {"lhs", to_json(*b.lhs)},
                    {"rhs", to_json(*b.rhs)}};
          },
          [](const ast::Call& c) -> json {
            json args = json::array();
            for (auto& a : c.args) args.push_back(to_json(*a));
            return {{"node", "call"}, {"name", c.name}, {"args", args}};
          },
          [](const ast::Paren& p) -> json {
            return {{"node", "paren"}, {"child", to_json(*p.child)}};
          },
      },
      node.v);
}

void dump_text(const Node& node, int depth, std::ostringstream& out) {
  std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  std::visit(
      overloaded{
          [&](const ast::NumberLit& n) {
            out << indent << "Number " << number_text(n.value) << "\n";
          },
          [&](const ast::TextLit& t) {
            out << indent << "Text \"" << t.value << "\"\n";
          },
          [&](const ast::BoolLit& b) {
            out << indent << "Bool " << (b.value ? "TRUE" : "FALSE") << "\n";
          },
          [&](const ast::ErrorLit& e) {
            out << indent << "Error " << error_text(e.code) << "\n";
          },
          [&](const ast::Ref& r) {
            out << indent << "Ref " << format_address(r.address, true) << "\n";
          },
          [&](const ast::Range& r) {
            out << indent << "Range" << (r.whole_column ? " (column)" : "")
                << "\n";
            dump_text(*r.start, depth + 1, out);
            dump_text(*r.end, depth + 1, out);
          },
          [&](const ast::Name& n) {
            out << indent << "Name " << n.name << "\n";
          },
          [&](const ast::Unary& u) {
            out << indent << "Unary "
                << (u.op == UnaryOp::kNeg ? "-" : "%") << "\n";
            dump_text(*u.child, depth + 1, out);
          },
          [&](const ast::Binary& b) {
            out << indent << "Binary " << binary_op_text(b.op) << "\n";
            dump_text(*b.lhs, depth + 1, out);
            dump_text(*b.rhs, depth + 1, out);
          },
          [&](const ast::Call& c) {
            out << indent << "Call " << c.name << "\n";
            for (auto& a : c.args) dump_text(*a, depth + 1, out);
          },
          [&](const ast::Paren& p) {
            out << indent << "Paren\n";
            dump_text(*p.child, depth + 1, out);
          },
      },
      node.v);
}

}  // namespace

NodePtr make_number(double v) { return make(ast::NumberLit{v}); }
NodePtr make_text(std::string v) { return make(ast::TextLit{std::move(v)}); }
NodePtr make_bool(bool v) { return make(ast::BoolLit{v}); }
NodePtr make_error(ErrorCode e) { return make(ast::ErrorLit{e}); }
NodePtr make_ref(CellAddress a, bool sheet_explicit) {
  return make(ast::Ref{std::move(a), sheet_explicit});
}
NodePtr make_range(NodePtr start, NodePtr end, bool whole_column) {
  return make(ast::Range{std::move(start), std::move(end), whole_column});
}
NodePtr make_range(const RangeRef& r, bool sheet_explicit) {
  CellAddress end = r.end;
  end.sheet = r.start.sheet;
  return make_range(make_ref(r.start, sheet_explicit), make_ref(end, false),
                    r.whole_column);
}
NodePtr make_name(std::string name) { return make(ast::Name{std::move(name)}); }
NodePtr make_unary(UnaryOp op, NodePtr child) {
  return make(ast::Unary{op, std::move(child)});
}
NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
  return make(ast::Binary{op, std::move(lhs), std::move(rhs)});
}
NodePtr make_call(std::string name, std::vector<NodePtr> args) {
  return make(ast::Call{std::move(name), std::move(args)});
}
NodePtr make_paren(NodePtr child) { return make(ast::Paren{std::move(child)}); }

std::string_view binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd:
      return "+";
    case BinaryOp::kSub:
      return "-";
    case BinaryOp::kMul:
      return "*";
    case BinaryOp::kDiv:
      return "/";
    case BinaryOp::kPow:
      return "^";
    case BinaryOp::kConcat:
      return "&";
    case BinaryOp::kEq:
      return "=";
    case BinaryOp::kNe:
      return "<>";
    case BinaryOp::kLt:
      return "<";
    case BinaryOp::kLe:
      return "<=";
    case BinaryOp::kGt:
      return ">";
    case BinaryOp::kGe:
      return ">=";
  }
  return "?";
}

bool is_comparison(BinaryOp op) { return precedence(op) == kComparison; }

bool is_arithmetic(BinaryOp op) {
  return op == BinaryOp::kAdd || op == BinaryOp::kSub ||
         op == BinaryOp::kMul || op == BinaryOp::kDiv ||
         op == BinaryOp::kPow;
}

NodePtr with_required_parens(const NodePtr& node) {
  const Node& n = *node;
  if (auto* num = n.as<ast::NumberLit>()) {
    // Negative literals only arise programmatically; the parser spells them
    // as negation of a positive literal.
    if (std::signbit(num->value)) {
      return make_unary(UnaryOp::kNeg, make_number(-num->value));
    }
    return node;
  }
  if (auto* u = n.as<ast::Unary>()) {
    NodePtr child = with_required_parens(u->child);
    int need = u->op == UnaryOp::kNeg ? kNegation : kPercent;
    return make_unary(u->op, wrap_if(child, precedence(*child) < need));
  }
  if (auto* b = n.as<ast::Binary>()) {
    int p = precedence(b->op);
    NodePtr lhs = with_required_parens(b->lhs);
    NodePtr rhs = with_required_parens(b->rhs);
    return make_binary(b->op, wrap_if(lhs, precedence(*lhs) < p),
                       wrap_if(rhs, precedence(*rhs) <= p));
  }
  if (auto* c = n.as<ast::Call>()) {
    std::vector<NodePtr> args;
    args.reserve(c->args.size());
    for (auto& a : c->args) args.push_back(with_required_parens(a));
    return make_call(c->name, std::move(args));
  }
  if (auto* p = n.as<ast::Paren>()) {
    return make_paren(with_required_parens(p->child));
  }
  if (auto* r = n.as<ast::Range>()) {
    return make_range(with_required_parens(r->start),
                      with_required_parens(r->end), r->whole_column);
  }
  return node;
}

std::string print_formula(const NodePtr& node) {
  std::string out = "=";
  print(*with_required_parens(node), out);
  return out;
}

bool structurally_equal(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return a == b;
  return equal(*a, *b);
}

const Node& unwrap(const Node& node) {
  const Node* n = &node;
  while (auto* p = n->as<ast::Paren>()) n = p->child.get();
  return *n;
}

std::string root_call_name(const NodePtr& node) {
  if (!node) return {};
  if (auto* c = unwrap(*node).as<ast::Call>()) return c->name;
  return {};
}

std::optional<RangeRef> static_range(const ast::Range& range) {
  auto* s = range.start->as<ast::Ref>();
  auto* e = range.end->as<ast::Ref>();
  if (!s || !e) return std::nullopt;
  RangeRef r;
  r.start = s->address;
  r.end = e->address;
  r.whole_column = range.whole_column;
  if (r.end.col < r.start.col) std::swap(r.start.col, r.end.col);
  if (r.end.row < r.start.row) std::swap(r.start.row, r.end.row);
  return r;
}

std::string dump_ast(const NodePtr& node, AstFormat format) {
  if (format == AstFormat::kJson) return to_json(*node).dump(2);
  std::ostringstream out;
  dump_text(*node, 0, out);
  return out.str();
}

}  // namespace sheetcheck
