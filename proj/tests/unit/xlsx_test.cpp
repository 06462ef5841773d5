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

#include <gtest/gtest.h>

#include "sheetcheck/error.hpp"
#include "sheetcheck/io.hpp"
#include "sheetcheck/recalc.hpp"
#include "zip_writer.hpp"

namespace sheetcheck {
namespace {

using testing::xlsx_package;

const CellValue& value_at(const Workbook& wb, const char* ref) {
  const Cell* c = wb.find_cell(parse_address(ref, wb.front_sheet()));
  static const CellValue blank;
  return c ? c->value : blank;
}

TEST(Xlsx, MinimalNumber) {
  auto bytes = xlsx_package({{"Sheet1", "<row r=\"1\"><c r=\"A1\"><v>1</v></c></row>"}});
  Workbook wb = read_xlsx(bytes);
  ASSERT_EQ(wb.sheets().size(), 1u);
  EXPECT_EQ(wb.sheets()[0].name(), "Sheet1");
  EXPECT_EQ(value_at(wb, "A1"), CellValue::number(1));
}

TEST(Xlsx, SharedString) {
  std::string sst =
      "<sst xmlns=\"http://schemas.openxmlformats.org/spreadsheetml/2006/main\">"
      "<si><t>x</t></si></sst>";
  auto bytes = xlsx_package(
      {{"S", "<row r=\"2\"><c r=\"B2\" t=\"s\"><v>0</v></c></row>"}}, &sst);
  EXPECT_EQ(value_at(read_xlsx(bytes), "B2"), CellValue::text("x"));
}

TEST(Xlsx, MissingSharedStringsNamesPart) {
  auto bytes = xlsx_package({{"S", "<row r=\"2\"><c r=\"B2\" t=\"s\"><v>0</v></c></row>"}});
  try {
    read_xlsx(bytes);
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_NE(std::string(e.what()).find("sharedStrings.xml"), std::string::npos);
  }
}

TEST(Xlsx, RichTextInlineBoolErrorAndFormula) {
  std::string sst =
      "<sst xmlns=\"http://schemas.openxmlformats.org/spreadsheetml/2006/main\">"
      "<si><r><t>ab</t></r><r><t>cd</t></r></si></sst>";
  auto bytes = xlsx_package(
      {{"S",
        "<row r=\"1\"><c r=\"A1\" t=\"s\"><v>0</v></c>"
        "<c r=\"B1\" t=\"inlineStr\"><is><t>hi</t></is></c>"
        "<c r=\"C1\" t=\"b\"><v>1</v></c><c r=\"D1\" t=\"e\"><v>#DIV/0!</v></c></row>"
        "<row r=\"2\"><c r=\"A2\"><v>2.5</v></c><c r=\"B2\"><f>A2*2</f><v>5</v></c></row>"}},
      &sst, true);
  Workbook wb = read_xlsx(bytes);
  EXPECT_EQ(value_at(wb, "A1"), CellValue::text("abcd"));
  EXPECT_EQ(value_at(wb, "B1"), CellValue::text("hi"));
  EXPECT_EQ(value_at(wb, "C1"), CellValue::boolean(true));
  EXPECT_EQ(value_at(wb, "D1"), CellValue::error(ErrorCode::kDiv0));
  const Cell* b2 = wb.find_cell(parse_address("B2", "S"));
  ASSERT_TRUE(b2 && b2->has_formula());
  EXPECT_EQ(print_formula(b2->formula), "=A2*2");
  EXPECT_TRUE(recalc_diff(wb).mismatches.empty());
}

TEST(Xlsx, SharedFormulaIsShifted) {
  auto bytes = xlsx_package(
      {{"S",
        "<row r=\"1\"><c r=\"A1\"><v>1</v></c><c r=\"B1\"><f t=\"shared\" ref=\"B1:B2\" "
        "si=\"0\">A1+1</f><v>2</v></c></row>"
        "<row r=\"2\"><c r=\"A2\"><v>5</v></c><c r=\"B2\"><f t=\"shared\" si=\"0\"/>"
        "<v>6</v></c></row>"}});
  Workbook wb = read_xlsx(bytes);
  const Cell* b2 = wb.find_cell(parse_address("B2", "S"));
  ASSERT_TRUE(b2 && b2->has_formula());
  EXPECT_EQ(print_formula(b2->formula), "=A2+1");
  EXPECT_TRUE(recalc_diff(wb).mismatches.empty());
}

TEST(Xlsx, CorruptPackages) {
  std::vector<std::uint8_t> junk = {'P', 'K', 1, 2, 3};
  EXPECT_THROW(read_xlsx(junk), IngestError);
  testing::ZipWriter zip;
  zip.add("hello.txt", "hi");
  EXPECT_THROW(read_xlsx(zip.finish()), IngestError);
  auto bad = xlsx_package({{"S", "<row r=\"1\"><c r=\"A1\"><v>zz</v></c></row>"}});
  EXPECT_THROW(read_xlsx(bad), IngestError);
}

}  // namespace
}  // namespace sheetcheck
