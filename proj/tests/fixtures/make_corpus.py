#!/usr/bin/env python3
# Copyright 2026 The Sheetcheck Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the rule corpus: <name>.json workbooks, optional <name>.config.json
audit configs and <name>.golden.json expected findings.

Goldens list the findings by rule, severity, cells and suggestion. They are
written by hand below, not produced by the tool.
"""

import json
import pathlib
import sys

MESSAGE = "Totals across and down do not match"


def cell(ref, v=None, f=None):
    out = {"ref": ref}
    if v is not None:
        out["v"] = v
    if f is not None:
        out["f"] = f
    return out


def book(sheets, front=None):
    doc = {"sheets": [{"name": n, "cells": cs} for n, cs in sheets]}
    if front:
        doc["front_sheet"] = front
    return doc


def finding(rule, severity, cells=(), suggestion=None):
    return {"rule": rule, "severity": severity, "cells": list(cells),
            "suggestion": suggestion}


# Three regions by three quarters, laid out with a label column A, a blank
# column E and a blank row 5 so every summed range starts and ends at a
# label or a blank. Row totals in F, column totals in row 6, grand in F6.
BODY = [[120, 80, 95], [60, 75, 40], [33, 44, 55]]


def padded_table(check=True):
    cs = [cell("A1", "Region"), cell("B1", "Q1"), cell("C1", "Q2"),
          cell("D1", "Q3"), cell("F1", "Total")]
    for i, (label, row) in enumerate(zip(["North", "South", "West"], BODY)):
        r = i + 2
        cs.append(cell(f"A{r}", label))
        for j, v in enumerate(row):
            cs.append(cell(f"{'BCD'[j]}{r}", v))
        cs.append(cell(f"F{r}", f=f"=SUM(A{r}:E{r})"))
    cs.append(cell("A5", "(Insert further rows above this line)"))
    cs.append(cell("A6", "Total"))
    for j, c in enumerate("BCD"):
        cs.append(cell(f"{c}6", f=f"=SUM({c}1:{c}5)"))
    cs.append(cell("F6", f="=SUM(F1:F5)"))
    if check:
        cs.append(cell("F8", f=f'=IF(ABS(F6-SUM(A6:E6))<0.01,"","{MESSAGE}")'))
    return cs


# Four sections of three items: header row, items, blank row, SUM subtotal.
SECTION_ITEMS = [[10, 20, 30], [5, 15, 25], [7, 8, 9], [100, 200, 300]]


def sectioned_column(subtotal_fn="SUM"):
    cs = [cell("A1", "Item"), cell("B1", "Amount")]
    subtotal_rows = []
    row = 2
    for k, items in enumerate(SECTION_ITEMS):
        head = row
        cs.append(cell(f"A{head}", f"Section {k + 1}"))
        for i, v in enumerate(items):
            cs.append(cell(f"A{head + 1 + i}", f"Item {k + 1}.{i + 1}"))
            cs.append(cell(f"B{head + 1 + i}", v))
        blank = head + len(items) + 1
        sub = blank + 1
        cs.append(cell(f"A{sub}", f"Subtotal {k + 1}"))
        if subtotal_fn == "SUM":
            cs.append(cell(f"B{sub}", f=f"=SUM(B{head}:B{blank})"))
        else:
            cs.append(cell(f"B{sub}", f=f"=SUBTOTAL(9,B{head}:B{blank})"))
        subtotal_rows.append(sub)
        row = sub + 1
    return cs, subtotal_rows, row


def balance_sheet(uses=(250, 350), shares=(0.2, 0.3, 0.5)):
    cs = [cell("A1", "Sources"), cell("B1", "Amount"),
          cell("C1", "Uses"), cell("D1", "Amount"), cell("F1", "Share")]
    for i, v in enumerate([100, 200, 300]):
        cs.append(cell(f"B{i + 2}", v))
    for i, v in enumerate(uses):
        cs.append(cell(f"D{i + 2}", v))
    for i, v in enumerate(shares):
        cs.append(cell(f"F{i + 2}", v))
    cs += [cell("A6", "Total"), cell("B6", f="=SUM(B1:B5)"),
           cell("D6", f="=SUM(D1:D5)"),
           cell("B8", f='=IF(ABS(B6-D6)<0.01,"","Sources and uses differ")')]
    return cs


def corpus():
    out = {}

    out["clean_table"] = (book([("Data", padded_table())]), None, [])

    summary = [cell("A1", "Grand total"), cell("B1", f="=Data!F6"),
               cell("A2", "Data check"), cell("B2", f="=Data!F8")]
    out["clean_two_sheets"] = (
        book([("Summary", summary), ("Data", padded_table())]), None, [])

    cs, subs, row = sectioned_column("SUBTOTAL")
    grand = row + 1
    cs += [cell(f"A{grand}", "Grand total"),
           cell(f"B{grand}", f=f"=SUBTOTAL(9,B1:B{row})"),
           cell(f"B{grand + 2}",
                f=f'=IF(ABS(B{grand}-SUM({",".join(f"B{r}" for r in subs)}))'
                  f'<0.01,"","Subtotals do not add up")')]
    out["clean_subtotals"] = (book([("List", cs)]), None, [])

    cs = [cell("B50", "Sales"), cell("D50", "Sales")]
    for r in range(51, 67):
        cs.append(cell(f"B{r}", r * 3 - 100))
        cs.append(cell(f"D{r}", r * 3 - 100))
    cs += [cell("B67", f="=SUBTOTAL(9,B50:OFFSET(B67,-1,0))"),
           cell("D67", f="=SUM(D50:INDEX(D:D,ROW()-1))"),
           cell("B69", f='=IF(ABS(B67-D67)<0.01,"","Anchored totals differ")')]
    out["clean_anchored"] = (book([("Data", cs)]), None, [])

    config = {
        "assertions": [
            {"kind": "equality", "lhs": "Balance!B6", "rhs": "Balance!D6",
             "label": "sources equal uses"},
            {"checklist_item": 3, "lhs": "B2:B4", "sign": "nonnegative",
             "label": "amounts not negative"},
            {"kind": "sum_to_constant", "lhs": "F2:F4", "constant": 1,
             "label": "shares add to 100%"},
            {"kind": "range", "lhs": "F2:F4", "min": 0, "max": 1},
        ],
        "ratio_bands": [
            {"numerator": "D6", "denominator": "B6", "reference_ratio": 1.0,
             "band_fraction": 0.05, "label": "uses over sources"},
        ],
    }
    out["clean_assertions"] = (book([("Balance", balance_sheet())]), config, [])

    # R1: a typed column total is 5 too high.
    no_r3 = {"enabled_rules": ["R1", "R2", "R4", "R5", "R6", "R7", "R8"]}
    cs = [cell("A1", "Region"), cell("B1", "Q1"), cell("C1", "Q2"),
          cell("D1", "Q3"), cell("E1", "Total")]
    for i, row in enumerate(BODY):
        r = i + 2
        for j, v in enumerate(row):
            cs.append(cell(f"{'BCD'[j]}{r}", v))
        cs.append(cell(f"E{r}", f=f"=SUM(B{r}:D{r})"))
    sums = [sum(row[j] for row in BODY) for j in range(3)]
    sums[2] += 5
    cs += [cell("A5", "Total"), cell("B5", sums[0]), cell("C5", sums[1]),
           cell("D5", sums[2]), cell("E5", f="=SUM(E2:E4)"),
           cell("E7", f=f'=IF(ABS(E5-SUM(B5:D5))<0.01,"","{MESSAGE}")')]
    # |S - (S + 5)| = 5, and |(4S + 5)/4 - S| = 1.25.
    out["seeded_r1_mismatch"] = (
        book([("Data", cs)]), no_r3,
        [finding("R1", "error", ["Data!E5"]), finding("R1", "error", ["Data!E5"])])

    out["seeded_r1_missing_check"] = (
        book([("Data", padded_table(check=False))]), None,
        [finding("R1", "info", ["Data!F6"],
                 f'=IF(ROUND(ABS(F6-SUM(A6:E6)),8)<0.01,"","{MESSAGE}")'),
         finding("R5", "info")])

    cs, subs, row = sectioned_column("SUM")
    grand = row + 1
    cs += [cell(f"A{grand}", "Grand total"),
           cell(f"B{grand}", f="=" + "+".join(f"B{r}" for r in subs))]
    out["seeded_r2_chain"] = (
        book([("List", cs)]), None,
        [finding("R2", "warning", [f"List!B{grand}"], f"=SUM(B2:B{row - 1})/2"),
         finding("R5", "info")])

    cs = [cell("B50", "Sales"), cell("D50", "Sales")]
    for r in range(51, 67):
        cs.append(cell(f"B{r}", r))
        cs.append(cell(f"D{r}", r))
    cs += [cell("B67", f="=SUBTOTAL(9,B51:B66)"),
           cell("D67", f="=SUM(D51:OFFSET(D67,-1,0))")]
    out["seeded_r3_insertion"] = (
        book([("Data", cs)]), None,
        [finding("R3", "warning", ["Data!B67", "Data!B51"]),
         finding("R3", "warning", ["Data!B67", "Data!B66"]),
         finding("R3", "warning", ["Data!D67", "Data!D51"]),
         finding("R5", "info")])

    cs, subs, row = sectioned_column("SUM")
    grand = row + 1
    cs += [cell(f"A{grand}", "Grand total"),
           cell(f"B{grand}", f=f"=SUM(B1:B{row})")]
    out["seeded_r4_double"] = (
        book([("List", cs)]), None,
        [finding("R4", "error", [f"List!B{grand}"] + [f"List!B{r}" for r in subs],
                 f"=SUM(B1:B{row})/2"),
         finding("R5", "info")])

    summary = [cell("A1", "Grand total"), cell("B1", f="=Data!F6")]
    out["seeded_r5_front"] = (
        book([("Summary", summary), ("Data", padded_table())]), None,
        [finding("R5", "warning", ["Data!F8"])])

    cs = [cell("A1", "Cost"), cell("B1", "Amount")]
    for i, v in enumerate([1200, 30.5, 4.25]):
        cs.append(cell(f"B{i + 2}", v))
    cs += [cell("A6", "Total"), cell("B6", f="=SUM(B1:B5)"),
           cell("C6", f="=FIXED(B6,2)"), cell("D6", f="=C6*2"),
           cell("C7", f="=DOLLAR(B6)"), cell("D7", f="=-C7"),
           cell("D8", f="=SUM(C6:C7)")]
    out["seeded_r6_text"] = (
        book([("Costs", cs)]), None,
        [finding("R6", "warning", ["Costs!D6", "Costs!C6"]),
         finding("R6", "warning", ["Costs!D7", "Costs!C7"]),
         finding("R5", "info")])

    config = {
        "assertions": [
            {"kind": "equality", "lhs": "Balance!B6", "rhs": "Balance!D6",
             "label": "sources equal uses"},
            {"kind": "sum_to_constant", "lhs": "F2:F4", "constant": 1,
             "label": "shares add to 100%"},
            {"kind": "sign", "lhs": "D2:D3", "sign": "positive"},
            {"kind": "equality", "lhs": "Missing!A1", "constant": 0},
        ],
    }
    out["seeded_r7_assertion"] = (
        book([("Balance", balance_sheet(uses=(250, -340), shares=(0.2, 0.3, 0.45)))]),
        config,
        [finding("R7", "error", ["Balance!B6", "Balance!D6"]),
         finding("R7", "error", ["Balance!F2"]),
         finding("R7", "error", ["Balance!D3"]),
         finding("R7", "error")])

    config = {
        "ratio_bands": [
            {"numerator": "D6", "denominator": "B6", "reference_ratio": 0.5,
             "band_fraction": 0.1, "label": "uses over sources"},
            {"numerator": "B6", "denominator": "H2:H3", "reference_ratio": 1,
             "band_fraction": 1},
        ],
    }
    cs = balance_sheet(uses=(250, 230))
    cs[-1] = cell("B8", f='=IF(ABS(B6-D6)<500,"","Sources and uses far apart")')
    cs += [cell("H2", 0), cell("H3", 0)]
    out["seeded_r8_ratio"] = (
        book([("Balance", cs)]), config,
        [finding("R8", "error", ["Balance!D6", "Balance!B6"]),
         finding("R8", "error", ["Balance!B6", "Balance!H2"])])
    return out


def main():
    root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else
                        pathlib.Path(__file__).parent / "corpus")
    root.mkdir(parents=True, exist_ok=True)
    for name, (wb, config, golden) in corpus().items():
        (root / f"{name}.json").write_text(json.dumps(wb, indent=1) + "\n")
        if config is not None:
            (root / f"{name}.config.json").write_text(
                json.dumps(config, indent=1) + "\n")
        (root / f"{name}.golden.json").write_text(
            json.dumps(golden, indent=1) + "\n")


if __name__ == "__main__":
    main()
