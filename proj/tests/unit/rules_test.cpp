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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sheetcheck/checks.hpp"
#include "sheetcheck/error.hpp"
#include "support.hpp"

namespace sheetcheck {
namespace {

using testing::at;
using testing::build;
using testing::count;
using testing::Harness;
using testing::Spec;

const double kBody[3][3] = {{120, 80, 95}, {60, 75, 40}, {33, 44, 55}};

std::string col(int c) { return std::string(1, static_cast<char>('A' + c)); }
std::string ref(int c, int r) { return col(c) + std::to_string(r); }

// Body A1:C3, row totals in D, column totals in row 4, grand total D4.
// Column totals are formulas unless typed values are given.
std::vector<Spec> tight_table(const double (*typed_cols)[3] = nullptr) {
  std::vector<Spec> cells;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) cells.emplace_back("S", ref(c, r + 1), kBody[r][c]);
    cells.emplace_back("S", ref(3, r + 1), nullptr,
                       "=SUM(A" + std::to_string(r + 1) + ":C" + std::to_string(r + 1) + ")");
  }
  for (int c = 0; c < 3; ++c) {
    if (typed_cols) {
      cells.emplace_back("S", ref(c, 4), (*typed_cols)[c]);
    } else {
      cells.emplace_back("S", ref(c, 4), nullptr, "=SUM(" + col(c) + "1:" + col(c) + "3)");
    }
  }
  cells.emplace_back("S", "D4", nullptr, "=SUM(D1:D3)");
  return cells;
}

std::vector<Finding> r1(const Workbook& wb, AuditConfig config = {}) {
  Harness h(wb, std::move(config));
  std::vector<Finding> out;
  for (const TableRegion& t : detect_tables(h.ctx, *wb.find_sheet("S"))) {
    auto f = check_crossfoot(h.ctx, t);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table detection

TEST(Tables, CrossFootTable) {
  Workbook wb = build(tight_table());
  Harness h(wb);
  auto tables = detect_tables(h.ctx, *wb.find_sheet("S"));
  ASSERT_EQ(tables.size(), 1u);
  const TableRegion& t = tables[0];
  EXPECT_EQ(t.bounds, parse_range("A1:D4", "S"));
  EXPECT_EQ(t.body, parse_range("A1:C3", "S"));
  EXPECT_EQ(t.totals_row, 4);
  EXPECT_EQ(t.totals_col, 4);
  EXPECT_EQ(t.grand_total, at("S", "D4"));
}

TEST(Tables, EmptySheet) {
  Workbook wb = build({{"T", "A1", 1}}, {"S", "T"});
  Harness h(wb);
  EXPECT_TRUE(detect_tables(h.ctx, *wb.find_sheet("S")).empty());
}

TEST(Tables, NumbersWithoutFormulas) {
  std::vector<Spec> cells;
  for (int r = 1; r <= 3; ++r) {
    for (int c = 0; c < 3; ++c) cells.emplace_back("S", ref(c, r), r * 10 + c);
  }
  Workbook wb = build(cells);
  Harness h(wb);
  auto tables = detect_tables(h.ctx, *wb.find_sheet("S"));
  ASSERT_EQ(tables.size(), 1u);
  EXPECT_FALSE(tables[0].totals_row);
  EXPECT_FALSE(tables[0].totals_col);
  EXPECT_FALSE(tables[0].grand_total);
}

TEST(Tables, SingleRowIsNotATable) {
  Workbook wb = build({{"S", "A1", 1}, {"S", "B1", 2}, {"S", "C1", 3}});
  Harness h(wb);
  EXPECT_TRUE(detect_tables(h.ctx, *wb.find_sheet("S")).empty());
}

// ---------------------------------------------------------------------------
// R1

TEST(Crossfoot, ConsistentTableWantsACheck) {
  Workbook wb = build(tight_table());
  auto findings = r1(wb);
  EXPECT_EQ(count(findings, "R1", Severity::kError), 0u);
  ASSERT_EQ(count(findings, "R1", Severity::kInfo), 1u);
  const Finding& f = findings[0];
  EXPECT_EQ(f.cells, std::vector<CellAddress>{at("S", "D4")});
  ASSERT_TRUE(f.suggestion);
  NodePtr check = parse_formula(*f.suggestion, "S");
  EXPECT_TRUE(is_check_cell(*check));
  EXPECT_EQ(*f.suggestion,
            "=IF(ROUND(ABS(D4-SUM(A4:C4)),8)<0.01,\"\",\"Totals across and down do not match\")");
}

TEST(Crossfoot, PerturbedRowSource) {
  double cols[3] = {213, 199, 190};
  std::vector<Spec> cells = tight_table(&cols);
  Workbook clean = build(cells);
  EXPECT_EQ(count(r1(clean), "R1", Severity::kError), 0u);
  cells[0].v = kBody[0][0] + 1;
  Workbook wb = build(cells);
  Harness h(wb);
  // Brute force: row totals recomputed, column totals typed.
  double across = 0, down = 0;
  for (int r = 1; r <= 3; ++r) across += h.values.at(at("S", ref(3, r))).as_number();
  for (double c : cols) down += c;
  auto findings = r1(wb);
  ASSERT_GE(count(findings, "R1", Severity::kError), 1u);
  auto it = std::find_if(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Severity::kError && f.message.rfind("row totals", 0) == 0;
  });
  ASSERT_NE(it, findings.end());
  EXPECT_NEAR(*it->measured, std::fabs(across - down), 1e-9);
  EXPECT_NEAR(*it->measured, 1.0, 1e-9);
  EXPECT_EQ(it->threshold, 0.01);
}

TEST(Crossfoot, TinyDifferenceIgnored) {
  double cols[3] = {213, 199, 190 + 5e-13};
  auto findings = r1(build(tight_table(&cols)));
  EXPECT_EQ(count(findings, "R1", Severity::kError), 0u);
}

TEST(Crossfoot, ToleranceFromConfig) {
  double cols[3] = {213, 199, 190.3};
  AuditConfig loose;
  loose.tolerance_abs = 0.5;
  EXPECT_EQ(count(r1(build(tight_table(&cols)), loose), "R1", Severity::kError), 0u);
  EXPECT_GE(count(r1(build(tight_table(&cols))), "R1", Severity::kError), 1u);
}

TEST(Crossfoot, ExistingCheckSuppressesInfo) {
  std::vector<Spec> cells = tight_table();
  cells.emplace_back("S", "F6", nullptr,
                     "=IF(ABS(D4-SUM(A4:C4))<0.01,\"\",\"Totals across and down do not match\")");
  EXPECT_EQ(count(r1(build(cells)), "R1", Severity::kInfo), 0u);
}

// ---------------------------------------------------------------------------
// R2

std::vector<Spec> numbers_in_b(int from, int to) {
  std::vector<Spec> cells;
  for (int r = from; r <= to; ++r) cells.emplace_back("S", "B" + std::to_string(r), r);
  return cells;
}

TEST(ChainedPlus, SixTerms) {
  std::vector<Spec> cells = numbers_in_b(1, 67);
  cells.emplace_back("S", "C1", nullptr, "=B11+B17+B27+B37+B48+B67");
  Harness h(build(cells));
  auto f = detect_chained_plus(h.ctx);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].severity, Severity::kWarning);
  EXPECT_NE(f[0].message.find("6"), std::string::npos);
}

TEST(ChainedPlus, BelowThreshold) {
  std::vector<Spec> cells = numbers_in_b(1, 3);
  cells.emplace_back("S", "C1", nullptr, "=B1+B2+B3");
  Harness h(build(cells));
  EXPECT_TRUE(detect_chained_plus(h.ctx).empty());
  AuditConfig three;
  three.chain_plus_min = 3;
  Harness h3(build(cells), three);
  EXPECT_EQ(detect_chained_plus(h3.ctx).size(), 1u);
}

TEST(ChainedPlus, TilingSuggestsHalvedSum) {
  // Sections B2:B10, B12:B20, ... each closed by a SUM in B11, B21, B31, B41.
  std::vector<Spec> cells;
  for (int s = 0; s < 4; ++s) {
    int top = 2 + 10 * s;
    for (int r = top; r < top + 9; ++r) cells.emplace_back("S", "B" + std::to_string(r), r);
    cells.emplace_back("S", "B" + std::to_string(top + 9), nullptr,
                       "=SUM(B" + std::to_string(top) + ":B" + std::to_string(top + 8) + ")");
  }
  cells.emplace_back("S", "B43", nullptr, "=B11+B21+B31+B41");
  Harness h(build(cells));
  auto f = detect_chained_plus(h.ctx);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].suggestion, "=SUM(B2:B41)/2");
}

TEST(ChainedPlus, InlineSumsWithoutTilingGetNoHalvedSum) {
  std::vector<Spec> cells = numbers_in_b(2, 40);
  cells.emplace_back("S", "B42", nullptr,
                     "=SUM(B2:B10)+SUM(B12:B20)+SUM(B22:B30)+SUM(B32:B40)");
  Workbook wb = build(cells);
  Harness h(wb);
  EXPECT_FALSE(tiling_holds(h.ctx, parse_range("B2:B40", "S")));
  auto f = detect_chained_plus(h.ctx);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_NE(f[0].suggestion, std::optional<std::string>("=SUM(B2:B40)/2"));
}

// Tiling predicate against enumeration: when it holds, SUM/2 equals the sum of
// the plain numbers.
TEST(ChainedPlus, TilingPredicateMatchesEnumeration) {
  std::mt19937 rng(99);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int holds = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Spec> cells;
    int row = 1;
    int sections = uniform(1, 5);
    for (int s = 0; s < sections; ++s) {
      int n = uniform(1, 4);
      int top = row;
      for (int i = 0; i < n; ++i) cells.emplace_back("S", "B" + std::to_string(row++), uniform(1, 50));
      // Occasionally close with a SUM that reaches too far or too short.
      int lo = top, hi = row - 1;
      int twist = uniform(0, 5);
      if (twist == 0 && lo > 1) --lo;
      if (twist == 1 && hi > lo) --hi;
      cells.emplace_back("S", "B" + std::to_string(row++), nullptr,
                         "=SUM(B" + std::to_string(lo) + ":B" + std::to_string(hi) + ")");
    }
    Workbook wb = build(cells);
    Harness h(wb);
    RangeRef enclosing = parse_range("B1:B" + std::to_string(row - 1), "S");
    double total = 0, plain = 0;
    for (const auto& [addr, entry] : h.values.entries()) {
      if (!enclosing.contains(addr) || !entry.value.is_number()) continue;
      total += entry.value.as_number();
      if (!wb.find_cell(addr)->has_formula()) plain += entry.value.as_number();
    }
    if (tiling_holds(h.ctx, enclosing)) {
      ++holds;
      EXPECT_EQ(total / 2, plain) << trial;
    }
  }
  EXPECT_GT(holds, 20);
}

// ---------------------------------------------------------------------------
// R3

std::vector<Finding> r3(const std::vector<Spec>& cells) {
  Harness h(build(cells));
  return detect_insertion_risk(h.ctx);
}

bool has_end(const std::vector<Finding>& f, const std::string& end_ref) {
  return std::any_of(f.begin(), f.end(), [&](const Finding& x) {
    return x.cells.size() == 2 && x.cells[1] == at("S", end_ref);
  });
}

TEST(Insertion, NonBlankEndsWarnTwice) {
  std::vector<Spec> cells = numbers_in_b(50, 66);
  cells.emplace_back("S", "B67", nullptr, "=SUBTOTAL(9,B51:B66)");
  auto f = r3(cells);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_TRUE(has_end(f, "B51"));
  EXPECT_TRUE(has_end(f, "B66"));
  EXPECT_EQ(f[0].cells[0], at("S", "B67"));
}

TEST(Insertion, BlankOrLabelEndsAreSafe) {
  std::vector<Spec> cells = numbers_in_b(52, 65);
  cells.emplace_back("S", "B51", "Costs");
  cells.emplace_back("S", "B67", nullptr, "=SUBTOTAL(9,B51:B66)");
  EXPECT_TRUE(r3(cells).empty());
}

TEST(Insertion, OffsetAnchorProtectsOnlyTheBottom) {
  std::vector<Spec> cells = numbers_in_b(50, 66);
  cells.emplace_back("S", "B67", nullptr, "=SUBTOTAL(9,B51:OFFSET(B67,-1,0))");
  auto f = r3(cells);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_TRUE(has_end(f, "B51"));
  EXPECT_NE(f[0].message.find("begins"), std::string::npos);
}

TEST(Insertion, IndexAnchorProtectsOnlyTheBottom) {
  std::vector<Spec> cells = numbers_in_b(50, 66);
  cells.emplace_back("S", "B67", nullptr, "=SUBTOTAL(9,B51:INDEX(B:B,ROW()-1))");
  auto f = r3(cells);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_TRUE(has_end(f, "B51"));
}

TEST(Insertion, HorizontalRanges) {
  std::vector<Spec> cells = {{"S", "A1", "Label"}, {"S", "B1", 1}, {"S", "C1", 2},
                             {"S", "E1", nullptr, "=SUM(A1:D1)"},
                             {"S", "F1", nullptr, "=SUM(B1:C1)"}};
  auto f = r3(cells);
  ASSERT_EQ(f.size(), 2u);
  for (const Finding& x : f) EXPECT_EQ(x.cells[0], at("S", "F1"));
}

// Anchored bottoms never warn at the bottom; the top warns exactly when the
// first cell holds a number.
TEST(InsertionProperty, AnchoredExemption) {
  std::mt19937 rng(67);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int trial = 0; trial < 200; ++trial) {
    int top = uniform(2, 30);
    int bottom = top + uniform(1, 20);
    int total = bottom + 1;
    std::vector<Spec> cells;
    for (int r = top; r <= bottom; ++r) {
      if (uniform(0, 4) == 0) continue;
      if (uniform(0, 5) == 0) {
        cells.emplace_back("S", "C" + std::to_string(r), "note");
      } else {
        cells.emplace_back("S", "C" + std::to_string(r), uniform(-100, 100));
      }
    }
    std::string start = "C" + std::to_string(top);
    std::string self = "C" + std::to_string(total);
    std::string end = uniform(0, 1) ? "OFFSET(" + self + ",-1,0)" : "INDEX(C:C,ROW()-1)";
    cells.emplace_back("S", self, nullptr, "=SUBTOTAL(9," + start + ":" + end + ")");
    Workbook wb = build(cells);
    Harness h(wb);
    auto f = detect_insertion_risk(h.ctx);
    bool top_number = h.values.at(at("S", start)).is_number();
    ASSERT_EQ(f.size(), top_number ? 1u : 0u) << trial;
    for (const Finding& x : f) {
      EXPECT_EQ(x.cells[1], at("S", start));
    }
  }
}

// ---------------------------------------------------------------------------
// R4

std::vector<Spec> sectioned(const std::string& fn) {
  // Sections of five numbers, each followed by its own total.
  std::vector<Spec> cells;
  for (int s = 0; s < 11; ++s) {
    int top = 2 + 6 * s;
    for (int r = top; r < top + 5; ++r) cells.emplace_back("S", "B" + std::to_string(r), r);
    std::string range = "B" + std::to_string(top) + ":B" + std::to_string(top + 4);
    cells.emplace_back("S", "B" + std::to_string(top + 5), nullptr,
                       fn == "SUM" ? "=SUM(" + range + ")" : "=SUBTOTAL(9," + range + ")");
  }
  return cells;
}

TEST(DoubleCount, SumOverSums) {
  std::vector<Spec> cells = sectioned("SUM");
  cells.emplace_back("S", "B68", nullptr, "=SUM(B2:B67)");
  Harness h(build(cells));
  auto f = detect_double_count(h.ctx);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].severity, Severity::kError);
  EXPECT_EQ(f[0].cells.size(), 12u);
  EXPECT_EQ(f[0].cells[0], at("S", "B68"));
  EXPECT_EQ(f[0].suggestion, "=SUM(B2:B67)/2");
}

TEST(DoubleCount, HalvedSumIsFine) {
  std::vector<Spec> cells = sectioned("SUM");
  cells.emplace_back("S", "B68", nullptr, "=SUM(B2:B67)/2");
  Harness h(build(cells));
  EXPECT_TRUE(detect_double_count(h.ctx).empty());
}

TEST(DoubleCount, NestedSubtotalsAreFine) {
  std::vector<Spec> cells = sectioned("SUBTOTAL");
  cells.emplace_back("S", "B68", nullptr, "=SUBTOTAL(9,B2:B67)");
  Harness h(build(cells));
  EXPECT_TRUE(detect_double_count(h.ctx).empty());
}

// ---------------------------------------------------------------------------
// R5

const char* const kCheckA1 = "=IF(ABS(B1-C1)<0.01,\"\",\"mismatch\")";

TEST(Propagation, FrontCarriesBoth) {
  Workbook wb = build({{"D1", "A1", nullptr, kCheckA1},
                       {"D2", "A1", nullptr, kCheckA1},
                       {"Front", "A1", nullptr, "=D1!A1&D2!A1"}},
                      {"Front", "D1", "D2"}, "Front");
  Harness h(wb);
  EXPECT_TRUE(check_indicator_propagation(h.ctx).empty());
}

TEST(Propagation, FrontMissesOne) {
  Workbook wb = build({{"D1", "A1", nullptr, kCheckA1},
                       {"D2", "A1", nullptr, kCheckA1},
                       {"Front", "A1", nullptr, "=D1!A1"}},
                      {"Front", "D1", "D2"}, "Front");
  Harness h(wb);
  auto f = check_indicator_propagation(h.ctx);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].severity, Severity::kWarning);
  EXPECT_NE(f[0].message.find("'D2'"), std::string::npos);
  EXPECT_EQ(f[0].cells, std::vector<CellAddress>{at("D2", "A1")});
}

TEST(Propagation, NoChecksAnywhere) {
  Harness h(build({{"S", "A1", 1}}));
  auto f = check_indicator_propagation(h.ctx);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].severity, Severity::kInfo);
  EXPECT_EQ(f[0].message, "no self-checks found");
  EXPECT_TRUE(f[0].cells.empty());
}

TEST(Propagation, CheckShapes) {
  EXPECT_TRUE(is_check_cell(*parse_formula(kCheckA1, "S")));
  EXPECT_TRUE(is_check_cell(*parse_formula("=IF(A1>B1,\"\",\"too big\")", "S")));
  EXPECT_TRUE(is_check_cell(*parse_formula("=IF(A1<>B1,\"bad\",\"\")", "S")));
  EXPECT_FALSE(is_check_cell(*parse_formula("=IF(A1>B1,1,2)", "S")));
  EXPECT_FALSE(is_check_cell(*parse_formula("=IF(A1,\"\",\"x\")", "S")));
}

// ---------------------------------------------------------------------------
// R6

TEST(TextNumbers, ArithmeticOnFixed) {
  Harness h(build({{"S", "C1", nullptr, "=FIXED(5)"}, {"S", "D1", nullptr, "=C1*2"}}));
  auto f = detect_text_number_hazard(h.ctx);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].cells[0], at("S", "D1"));
  EXPECT_EQ(f[0].cells[1], at("S", "C1"));
}

TEST(TextNumbers, SumExclusionIsIntended) {
  Harness h(build({{"S", "C1", nullptr, "=FIXED(5)"}, {"S", "D1", nullptr, "=SUM(C1:C1)"}}));
  EXPECT_TRUE(detect_text_number_hazard(h.ctx).empty());
}

TEST(TextNumbers, NoRenderingsNoFindings) {
  Harness h(build({{"S", "C1", 5}, {"S", "D1", nullptr, "=C1*2"}}));
  EXPECT_TRUE(detect_text_number_hazard(h.ctx).empty());
}

// ---------------------------------------------------------------------------
// R7, R8

std::vector<Finding> asserted(const std::vector<Spec>& cells, const std::string& config) {
  Harness h(build(cells), parse_audit_config(config));
  return check_assertions(h.ctx);
}

TEST(Assertions, PercentagesSumToOne) {
  auto f = asserted({{"S", "A1", 0.4}, {"S", "A2", 0.35}, {"S", "A3", 0.25}},
                    R"({"assertions":[{"kind":"sum_to_constant","lhs":"A1:A3",
                        "constant":1.0,"tolerance":1e-9}]})");
  EXPECT_TRUE(f.empty());
}

TEST(Assertions, AllocationMismatch) {
  auto f = asserted({{"S", "A1", 10}, {"S", "A2", 20}, {"S", "A3", 30}},
                    R"({"assertions":[{"kind":"sum_to_constant","lhs":"A1:A3",
                        "constant":70,"label":"allocation"}]})");
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].rule, "R7");
  EXPECT_EQ(f[0].severity, Severity::kError);
  EXPECT_EQ(f[0].measured, 60);
  EXPECT_EQ(f[0].threshold, 70);
  EXPECT_EQ(f[0].message.rfind("allocation: ", 0), 0u);
}

TEST(Assertions, EqualitySignRangeConvergence) {
  std::vector<Spec> cells = {{"S", "A1", 5}, {"S", "A2", -1}, {"S", "B1", 4},
                             {"S", "C1", 1.0000001}, {"S", "C2", 1.0}};
  auto f = asserted(cells, R"({"assertions":[
      {"kind":"equality","lhs":"A1:A2","rhs":"B1"},
      {"checklist_item":3,"lhs":"A1:A2","sign":"nonnegative"},
      {"checklist_item":13,"lhs":"A1:B1","min":0,"max":4.5},
      {"checklist_item":12,"lhs":"C1","rhs":"C2","tolerance":1e-6},
      {"checklist_item":6,"lhs":"A2"}]})");
  ASSERT_EQ(f.size(), 3u);
  EXPECT_NE(f[0].message.find("not non-negative"), std::string::npos);
  EXPECT_EQ(f[0].cells, std::vector<CellAddress>{at("S", "A2")});
  EXPECT_EQ(f[1].measured, 5);
  EXPECT_EQ(f[1].threshold, 4.5);
  EXPECT_EQ(f[2].measured, 1);
}

TEST(Assertions, MissingCellsAreConfigErrors) {
  auto f = asserted({{"S", "A1", 1}},
                    R"({"assertions":[{"kind":"equality","lhs":"Z9","rhs":"A1"},
                                      {"kind":"equality","lhs":"Nope!A1","constant":1}]})");
  ASSERT_EQ(f.size(), 2u);
  for (const Finding& x : f) {
    EXPECT_EQ(x.severity, Severity::kError);
    EXPECT_NE(x.message.find("config error"), std::string::npos);
  }
}

TEST(Assertions, RatioBand) {
  std::vector<Spec> cells = {{"S", "A1", 105}, {"S", "A2", 100}};
  auto band = [&](double fraction) {
    return asserted(cells, R"({"ratio_bands":[{"numerator":"A1","denominator":"A2",
                                "reference_ratio":1.0,"band_fraction":)" +
                               std::to_string(fraction) + "}]}");
  };
  EXPECT_TRUE(band(0.10).empty());
  auto f = band(0.02);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].rule, "R8");
  EXPECT_NEAR(*f[0].measured, 0.05, 1e-12);
  EXPECT_NEAR(*f[0].threshold, 0.02, 1e-12);
}

TEST(Config, Defaults) {
  AuditConfig c = parse_audit_config("{}");
  EXPECT_EQ(c.tolerance_abs, 0.01);
  EXPECT_EQ(c.chain_plus_min, 4);
  EXPECT_EQ(c.totals_line_fraction, 0.8);
  EXPECT_EQ(c.enabled_rules.size(), 8u);
  EXPECT_TRUE(c.ratio_bands.empty());
}

TEST(Config, Rejections) {
  for (const char* bad : {
           "[", "{\"bogus\":1}", "{\"tolerance_abs\":-1}", "{\"chain_plus_min\":1}",
           "{\"enabled_rules\":[\"R9\"]}", "{\"severity_overrides\":{\"R1\":\"fatal\"}}",
           R"({"ratio_bands":[{"numerator":"A1","denominator":"A2","reference_ratio":1,"band_fraction":0}]})",
           R"({"ratio_bands":[{"numerator":"A1","denominator":"A2","reference_ratio":1,"band_fraction":1.5}]})",
           R"({"assertions":[{"checklist_item":8,"lhs":"A1"}]})",
           R"({"assertions":[{"checklist_item":99,"lhs":"A1"}]})",
           R"({"assertions":[{"kind":"equality","lhs":"A1"}]})",
           R"({"assertions":[{"kind":"range","lhs":"A1","min":2,"max":1}]})",
           R"({"assertions":[{"kind":"convergence","lhs":"A1","constant":1}]})"}) {
    EXPECT_THROW(parse_audit_config(bad), ConfigError) << bad;
  }
}

TEST(Config, RoundTrip) {
  AuditConfig c = parse_audit_config(
      R"({"tolerance_abs":0.5,"enabled_rules":["R1","R7"],"severity_overrides":{"R1":"warning"},
          "assertions":[{"checklist_item":1,"lhs":"A1","rhs":"B1","label":"bs"}]})");
  EXPECT_EQ(audit_config_to_json(parse_audit_config(audit_config_to_json(c))),
            audit_config_to_json(c));
}

// ---------------------------------------------------------------------------
// run_audit

// One workbook that trips every rule.
Workbook everything() {
  std::vector<Spec> cells = tight_table();
  cells[0].v = 121;
  for (int r = 2; r <= 8; ++r) cells.emplace_back("T", "B" + std::to_string(r), r);
  cells.emplace_back("T", "B9", nullptr, "=SUM(B2:B4)");
  cells.emplace_back("T", "B10", nullptr, "=SUM(B2:B9)");
  cells.emplace_back("T", "C1", nullptr, "=B2+B3+B4+B5+B6");
  cells.emplace_back("T", "C2", nullptr, "=FIXED(B2)");
  cells.emplace_back("T", "C3", nullptr, "=C2+1");
  cells.emplace_back("T", "D1", nullptr, kCheckA1);
  return build(cells, {"S", "T"}, "S");
}

const char* const kEverythingConfig =
    R"({"assertions":[{"kind":"equality","lhs":"T!B2","constant":0}],
        "ratio_bands":[{"numerator":"T!B2","denominator":"T!B3","reference_ratio":10,"band_fraction":0.1}]})";

TEST(Audit, EveryRuleFires) {
  AuditReport report = run_audit(everything(), parse_audit_config(kEverythingConfig));
  std::set<std::string> rules;
  for (const Finding& f : report.findings) rules.insert(f.rule);
  EXPECT_EQ(rules, (std::set<std::string>{"R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8"}));
}

TEST(Audit, DisablingR2) {
  std::vector<Spec> cells = numbers_in_b(1, 67);
  cells.emplace_back("S", "C1", nullptr, "=B11+B17+B27+B37+B48+B67");
  AuditConfig c = parse_audit_config(R"({"enabled_rules":["R1","R3","R4","R5","R6","R7","R8"]})");
  for (const Finding& f : run_audit(build(cells), c).findings) EXPECT_NE(f.rule, "R2");
  EXPECT_EQ(count(run_audit(build(cells), {}).findings, "R2", Severity::kWarning), 1u);
}

TEST(AuditProperty, Monotonicity) {
  Workbook wb = everything();
  AuditConfig full = parse_audit_config(kEverythingConfig);
  AuditReport all = run_audit(wb, full);
  std::mt19937 rng(8);
  const char* ids[] = {"R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8"};
  for (int trial = 0; trial < 64; ++trial) {
    AuditConfig c = full;
    c.enabled_rules.clear();
    for (const char* id : ids) {
      if (rng() % 2) c.enabled_rules.insert(id);
    }
    AuditReport some = run_audit(wb, c);
    std::size_t expected = 0;
    for (const Finding& f : all.findings) expected += c.enabled(f.rule);
    EXPECT_EQ(some.findings.size(), expected);
    for (const Finding& f : some.findings) EXPECT_TRUE(c.enabled(f.rule)) << f.rule;
  }
}

TEST(AuditProperty, MutationSoundness) {
  std::mt19937 rng(4);
  double cols[3] = {213, 199, 190};
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Spec> cells = tight_table(&cols);
    int r = static_cast<int>(rng() % 3), c = static_cast<int>(rng() % 3);
    bool big = trial % 2 == 0;
    double delta = big ? 0.01 + (rng() % 1000) / 10.0 : 1e-13;
    if (rng() % 2) delta = -delta;
    for (Spec& s : cells) {
      if (s.ref == ref(c, r + 1)) s.v = kBody[r][c] + delta;
    }
    auto findings = run_audit(build(cells), {}).findings;
    EXPECT_EQ(count(findings, "R1", Severity::kError) > 0, big) << trial;
  }
}

TEST(Audit, SeverityOverride) {
  std::vector<Spec> cells = numbers_in_b(1, 67);
  cells.emplace_back("S", "C1", nullptr, "=B11+B17+B27+B37+B48+B67");
  AuditConfig c = parse_audit_config(R"({"severity_overrides":{"R2":"error"}})");
  EXPECT_EQ(count(run_audit(build(cells), c).findings, "R2", Severity::kError), 1u);
}

TEST(Audit, ReportShape) {
  AuditReport report = run_audit(everything(), parse_audit_config(kEverythingConfig));
  auto j = nlohmann::json::parse(report.to_json());
  EXPECT_EQ(j["tool"], "sheetcheck");
  EXPECT_EQ(j["footer"], kReportFooter);
  SeverityCounts n = report.counts();
  EXPECT_EQ(j["counts"]["error"], n.error);
  EXPECT_EQ(j["counts"]["warning"], n.warning);
  EXPECT_EQ(j["counts"]["info"], n.info);
  EXPECT_EQ(j["findings"].size(), report.findings.size());
  for (const auto& f : j["findings"]) {
    for (const char* key : {"rule", "severity", "sheet", "cells", "message"}) {
      EXPECT_TRUE(f.contains(key)) << key;
    }
    EXPECT_EQ(f.contains("measured"), f.contains("threshold"));
    if (f.contains("suggestion") && f["suggestion"].get<std::string>()[0] == '=') {
      EXPECT_NO_THROW(parse_formula(f["suggestion"].get<std::string>(), "S"));
    }
  }
  EXPECT_EQ(report.to_json(), run_audit(everything(), parse_audit_config(kEverythingConfig)).to_json());
  std::string text = report.to_text();
  EXPECT_NE(text.find(kReportFooter), std::string::npos);
}

TEST(Audit, FindingsAreSorted) {
  AuditReport report = run_audit(everything(), parse_audit_config(kEverythingConfig));
  Workbook wb = everything();
  auto key = [&](const Finding& f) {
    if (f.cells.empty()) return std::make_tuple(-1, 0, 0, f.rule);
    const CellAddress& a = f.cells[0];
    return std::make_tuple(static_cast<int>(*wb.sheet_index(a.sheet)), a.row, a.col, f.rule);
  };
  for (std::size_t i = 1; i < report.findings.size(); ++i) {
    EXPECT_LE(key(report.findings[i - 1]), key(report.findings[i]));
  }
}

}  // namespace
}  // namespace sheetcheck
