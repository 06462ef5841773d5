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

#include <random>

#include <gtest/gtest.h>

#include "sheetcheck/error.hpp"
#include "sheetcheck/formula.hpp"
#include "support.hpp"

namespace sheetcheck {
namespace {

const char* const kSampleFormulas[] = {
    "=IF( ABS(H10-J10)<0.01, \"\", \"Totals across and down do not match\" )",
    "=B11+B17+B27+B37+B48+B67",
    "=SUM(B2:B67)/2",
    "=SUBTOTAL(9,B2:B67)",
    "=SUBTOTAL(9,B51:B66)",
    "=SUBTOTAL(9,B52:B67)",
    "=SUBTOTAL(9,B51:OFFSET(B67,-1,0))",
    "=SUBTOTAL(9,B51:INDEX(B:B,ROW()-1))",
};

std::string strip_spaces(std::string s) {
  std::string out;
  bool in_text = false;
  for (char c : s) {
    if (c == '"') in_text = !in_text;
    if (c != ' ' || in_text) out += c;
  }
  return out;
}

TEST(Parser, PlusChainLeansLeft) {
  NodePtr n = parse_formula("=B11+B17+B27+B37+B48+B67", "Data");
  const char* expected[] = {"B67", "B48", "B37", "B27", "B17"};
  const Node* cur = n.get();
  for (const char* ref : expected) {
    auto* b = cur->as<ast::Binary>();
    ASSERT_TRUE(b && b->op == BinaryOp::kAdd);
    auto* r = b->rhs->as<ast::Ref>();
    ASSERT_TRUE(r);
    EXPECT_EQ(r->address, parse_address(ref, "Data"));
    cur = b->lhs.get();
  }
  ASSERT_TRUE(cur->as<ast::Ref>());
  EXPECT_EQ(cur->as<ast::Ref>()->address, parse_address("B11", "Data"));
}

TEST(Parser, NumberLiteral) {
  NodePtr n = parse_formula("=1", "S");
  ASSERT_TRUE(n->as<ast::NumberLit>());
  EXPECT_EQ(n->as<ast::NumberLit>()->value, 1.0);
}

TEST(Parser, IndexAnchoredRange) {
  NodePtr n = parse_formula("=SUBTOTAL(9,B51:INDEX(B:B,ROW()-1))", "Data");
  auto* call = n->as<ast::Call>();
  ASSERT_TRUE(call);
  EXPECT_EQ(call->name, "SUBTOTAL");
  ASSERT_EQ(call->args.size(), 2u);
  EXPECT_EQ(call->args[0]->as<ast::NumberLit>()->value, 9);
  auto* range = call->args[1]->as<ast::Range>();
  ASSERT_TRUE(range);
  EXPECT_EQ(range->start->as<ast::Ref>()->address, parse_address("B51", "Data"));
  auto* index = range->end->as<ast::Call>();
  ASSERT_TRUE(index);
  EXPECT_EQ(index->name, "INDEX");
  EXPECT_TRUE(index->args[0]->as<ast::Range>()->whole_column);
  EXPECT_FALSE(static_range(*range));
}

TEST(Parser, ErrorsCarryColumn) {
  try {
    parse_formula("=SUM(B2:B67", "S");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 11u);
  }
  try {
    parse_formula("=1+*2", "S");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 3u);
  }
  EXPECT_THROW(parse_formula("1+2", "S"), ParseError);
  EXPECT_THROW(parse_formula("=\"abc", "S"), ParseError);
  EXPECT_THROW(parse_formula("=", "S"), ParseError);
  EXPECT_THROW(parse_formula("=1 2", "S"), ParseError);
}

TEST(Parser, CaseAndSheets) {
  NodePtr n = parse_formula("=sum('My Sheet'!a1:b2,Data!$C$3)", "S");
  auto* call = n->as<ast::Call>();
  ASSERT_TRUE(call);
  EXPECT_EQ(call->name, "SUM");
  EXPECT_EQ(print_formula(n), "=SUM('My Sheet'!A1:B2,Data!$C$3)");
}

TEST(Printer, SampleFormulasPrint) {
  EXPECT_EQ(print_formula(parse_formula("=SUM(B2:B67)/2", "S")), "=SUM(B2:B67)/2");
  EXPECT_EQ(print_formula(make_number(0)), "=0");
  for (const char* f : kSampleFormulas) {
    EXPECT_EQ(print_formula(parse_formula(f, "Data")), strip_spaces(f)) << f;
  }
}

TEST(Printer, AddsRequiredParens) {
  NodePtr sum = make_binary(BinaryOp::kAdd, make_number(1), make_number(2));
  NodePtr product = make_binary(BinaryOp::kMul, sum, make_number(3));
  EXPECT_EQ(print_formula(product), "=(1+2)*3");
  NodePtr left = make_binary(BinaryOp::kSub, make_number(1),
                             make_binary(BinaryOp::kSub, make_number(2), make_number(3)));
  EXPECT_EQ(print_formula(left), "=1-(2-3)");
  NodePtr neg_pow = make_binary(BinaryOp::kPow,
                                make_unary(UnaryOp::kNeg, make_number(2)), make_number(2));
  EXPECT_EQ(print_formula(neg_pow), "=-2^2");
}

TEST(References, Examples) {
  RefSet a = extract_references(parse_formula("=B11+B17", "S"));
  EXPECT_EQ(a.cells, (std::set<CellAddress>{parse_address("B11", "S"),
                                            parse_address("B17", "S")}));
  EXPECT_TRUE(a.ranges.empty());
  RefSet b = extract_references(parse_formula("=1+2", "S"));
  EXPECT_TRUE(b.cells.empty() && b.ranges.empty() && b.dynamic.empty());
  RefSet c = extract_references(parse_formula("=SUBTOTAL(9,B51:OFFSET(B67,-1,0))", "S"));
  EXPECT_EQ(c.cells, (std::set<CellAddress>{parse_address("B51", "S"),
                                            parse_address("B67", "S")}));
  ASSERT_EQ(c.dynamic.size(), 1u);
  EXPECT_EQ(print_formula(c.dynamic[0]), "=B51:OFFSET(B67,-1,0)");
  RefSet d = extract_references(parse_formula("=SUM(B2:B5)", "S"));
  EXPECT_EQ(d.ranges.size(), 1u);
}

TEST(Precedence, EvaluatesTo50) {
  Workbook wb = testing::build({{"S", "A1", nullptr, "=2+3*4^2"}});
  EXPECT_EQ(testing::value(wb, "A1"), CellValue::number(50));
}

// ---------------------------------------------------------------------------
// Random ASTs: print then parse gives the tree with the parentheses the
// printer needs, and printing is a fixed point.

class AstGen {
 public:
  explicit AstGen(std::uint32_t seed) : rng_(seed) {}

  NodePtr node(int depth) {
    int pick = uniform(0, depth <= 0 ? 6 : 12);
    switch (pick) {
      case 0: return make_number(number());
      case 1: return make_text(text());
      case 2: return make_bool(coin());
      case 3: return make_error(static_cast<ErrorCode>(uniform(0, 4)));
      case 4: return ref_node();
      case 5: return range();
      case 6: return make_name(names_[uniform(0, 2)]);
      case 7: return make_unary(coin() ? UnaryOp::kNeg : UnaryOp::kPercent,
                                node(depth - 1));
      case 8:
      case 9: {
        auto op = static_cast<BinaryOp>(uniform(0, 11));
        return make_binary(op, node(depth - 1), node(depth - 1));
      }
      case 10: return make_paren(node(depth - 1));
      default: {
        std::vector<NodePtr> args;
        int n = uniform(0, 3);
        for (int i = 0; i < n; ++i) args.push_back(node(depth - 1));
        return make_call(functions_[uniform(0, 5)], std::move(args));
      }
    }
  }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return uniform(0, 1) == 1; }

  double number() {
    switch (uniform(0, 3)) {
      case 0: return uniform(0, 1000);
      case 1: return std::uniform_real_distribution<double>(0, 1)(rng_);
      case 2: return std::ldexp(uniform(1, 999), uniform(-60, 60));
      default: return 0.01;
    }
  }

  std::string text() {
    const char* pool[] = {"", "a", "Totals across", "say \"hi\"", "x,y", "1+2"};
    return pool[uniform(0, 5)];
  }

  CellAddress address() {
    const char* sheets[] = {"Data", "Data", "Other", "My Sheet"};
    CellAddress a{sheets[uniform(0, 3)], uniform(1, 800), uniform(1, 5000),
                  coin(), coin()};
    return a;
  }

  NodePtr ref_node() {
    CellAddress a = address();
    return make_ref(a, a.sheet != "Data");
  }

  NodePtr range() {
    CellAddress a = address();
    CellAddress b = address();
    b.sheet = a.sheet;
    if (b.col < a.col) std::swap(a.col, b.col);
    if (b.row < a.row) std::swap(a.row, b.row);
    bool explicit_sheet = a.sheet != "Data";
    if (uniform(0, 5) == 0) {
      return make_range(make_ref(a, explicit_sheet),
                        make_call("OFFSET", {make_ref(b, explicit_sheet), make_number(uniform(0, 3)),
                                             make_number(0)}));
    }
    return make_range(RangeRef{a, b, false}, explicit_sheet);
  }

  std::mt19937 rng_;
  const char* names_[3] = {"rate", "Total_2024", "x.y"};
  const char* functions_[6] = {"SUM", "IF", "OFFSET", "INDEX", "ROW", "NPV"};
};

TEST(FormulaProperty, PrintParseRoundTrip) {
  AstGen gen(1234);
  for (int i = 0; i < 1000; ++i) {
    NodePtr ast = gen.node(5);
    std::string text = print_formula(ast);
    NodePtr back;
    ASSERT_NO_THROW(back = parse_formula(text, "Data")) << text;
    ASSERT_TRUE(structurally_equal(back, with_required_parens(ast))) << text;
    ASSERT_EQ(print_formula(back), text);
  }
}

TEST(FormulaProperty, SampleFormulasRoundTrip) {
  for (const char* f : kSampleFormulas) {
    NodePtr a = parse_formula(f, "Data");
    NodePtr b = parse_formula(print_formula(a), "Data");
    EXPECT_TRUE(structurally_equal(a, b)) << f;
  }
}

TEST(FormulaProperty, ShiftRelativeKeepsAbsolutes) {
  NodePtr n = parse_formula("=A1+$B$2+C$3+$D4", "S");
  EXPECT_EQ(print_formula(shift_relative(n, 2, 1)), "=B3+$B$2+D$3+$D6");
  EXPECT_EQ(print_formula(shift_relative(parse_formula("=A1", "S"), -1, 0)), "=#REF!");
}

}  // namespace
}  // namespace sheetcheck
