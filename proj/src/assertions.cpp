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

#include "audit_util.hpp"
#include "sheetcheck/error.hpp"

namespace sheetcheck {

namespace {

struct Operand {
  RangeRef range;
  std::vector<CellAddress> numbers;  // cells holding numbers
  double sum = 0;
  std::optional<CellAddress> error_at;
};

// Resolves a cell/range text against the workbook. nullopt (with `why`)
// when the sheet is unknown or nothing exists in the range.
std::optional<Operand> read_operand(const AuditContext& ctx,
                                    const std::string& text, std::string& why) {
  const Workbook& wb = ctx.workbook;
  RangeRef r;
  try {
    r = parse_range(text, wb.front_sheet());
  } catch (const AddressError& e) {
    why = "bad reference '" + text + "': " + e.what();
    return std::nullopt;
  }
  const Sheet* sheet = wb.find_sheet(r.start.sheet);
  if (!sheet || !iequals(r.start.sheet, r.end.sheet)) {
    why = "'" + text + "' names a sheet that does not exist";
    return std::nullopt;
  }
  r.start.sheet = r.end.sheet = sheet->name();
  if (r.whole_column) r = clip_to_used(wb, r);
  auto cells = detail::present_cells(wb, r);
  if (cells.empty()) {
    why = "'" + text + "' refers to missing cells";
    return std::nullopt;
  }
  Operand op{r, {}, 0, std::nullopt};
  for (const Cell* c : cells) {
    const CellValue& v = ctx.values.at(c->address);
    if (v.is_error() && !op.error_at) op.error_at = c->address;
    if (v.is_number()) {
      op.numbers.push_back(c->address);
      op.sum += v.as_number();
    }
  }
  return op;
}

Finding base(const std::string& rule, const std::string& label) {
  Finding f;
  f.rule = rule;
  f.severity = Severity::kError;
  f.message = label.empty() ? "" : label + ": ";
  return f;
}

Finding config_error(const std::string& rule, const std::string& label,
                     const std::string& why) {
  Finding f = base(rule, label);
  f.message += "config error: " + why;
  return f;
}

std::string sign_text(SignRule s) {
  switch (s) {
    case SignRule::kPositive: return "positive";
    case SignRule::kNegative: return "negative";
    case SignRule::kNonNegative: return "non-negative";
    case SignRule::kNonPositive: return "non-positive";
  }
  return "";
}

bool sign_ok(SignRule s, double v) {
  switch (s) {
    case SignRule::kPositive: return v > 0;
    case SignRule::kNegative: return v < 0;
    case SignRule::kNonNegative: return v >= 0;
    case SignRule::kNonPositive: return v <= 0;
  }
  return false;
}

void check_one(const AuditContext& ctx, const AssertionSpec& a,
               std::vector<Finding>& out) {
  std::string why;
  auto lhs = read_operand(ctx, a.lhs, why);
  if (!lhs) return out.push_back(config_error("R7", a.label, why));
  std::optional<Operand> rhs;
  if (a.rhs) {
    rhs = read_operand(ctx, *a.rhs, why);
    if (!rhs) return out.push_back(config_error("R7", a.label, why));
  }
  for (const Operand* op : {&*lhs, rhs ? &*rhs : nullptr}) {
    if (op && op->error_at) {
      Finding f = base("R7", a.label);
      f.cells = {*op->error_at};
      f.message += format_address(*op->error_at, true) + " holds " +
                   display_text(ctx.values.at(*op->error_at));
      return out.push_back(std::move(f));
    }
  }
  std::string kind(assertion_kind_text(a.kind));
  switch (a.kind) {
    case AssertionKind::kEquality:
    case AssertionKind::kConvergence: {
      double other = rhs ? rhs->sum : a.constant.value_or(0);
      double diff = std::fabs(lhs->sum - other);
      if (diff <= a.tolerance) return;
      Finding f = base("R7", a.label);
      f.cells = {lhs->range.start};
      if (rhs) f.cells.push_back(rhs->range.start);
      f.message += kind + " failed: " + format_range(lhs->range, true) + " = " +
                   format_general(lhs->sum) + " vs " +
                   (rhs ? format_range(rhs->range, true)
                        : std::string("constant")) +
                   " = " + format_general(other);
      f.measured = diff;
      f.threshold = a.tolerance;
      return out.push_back(std::move(f));
    }
    case AssertionKind::kSumToConstant: {
      double target = a.constant.value_or(0);
      if (std::fabs(lhs->sum - target) <= a.tolerance) return;
      Finding f = base("R7", a.label);
      f.cells = {lhs->range.start};
      f.message += format_range(lhs->range, true) + " sums to " +
                   format_general(lhs->sum) + ", expected " +
                   format_general(target) + " within " +
                   format_general(a.tolerance);
      f.measured = lhs->sum;
      f.threshold = target;
      return out.push_back(std::move(f));
    }
    case AssertionKind::kSign:
    case AssertionKind::kRange: {
      std::vector<CellAddress> bad;
      std::optional<double> worst;
      double bound = 0;
      for (const CellAddress& c : lhs->numbers) {
        double v = ctx.values.at(c).as_number();
        bool ok = true;
        if (a.kind == AssertionKind::kSign) {
          ok = sign_ok(a.sign, v);
        } else if (a.min && v < *a.min) {
          ok = false;
          if (!worst) bound = *a.min;
        } else if (a.max && v > *a.max) {
          ok = false;
          if (!worst) bound = *a.max;
        }
        if (!ok) {
          bad.push_back(c);
          if (!worst) worst = v;
        }
      }
      if (bad.empty()) return;
      Finding f = base("R7", a.label);
      f.cells = bad;
      f.message += std::to_string(bad.size()) + " cell(s) of " +
                   format_range(lhs->range, true) +
                   (a.kind == AssertionKind::kSign
                        ? " are not " + sign_text(a.sign)
                        : std::string(" fall outside the allowed range"));
      f.measured = *worst;
      f.threshold = bound;
      return out.push_back(std::move(f));
    }
  }
}

void check_band(const AuditContext& ctx, const RatioBand& b,
                std::vector<Finding>& out) {
  std::string why;
  auto num = read_operand(ctx, b.numerator, why);
  if (!num) return out.push_back(config_error("R8", b.label, why));
  auto den = read_operand(ctx, b.denominator, why);
  if (!den) return out.push_back(config_error("R8", b.label, why));
  Finding f = base("R8", b.label);
  f.cells = {num->range.start, den->range.start};
  if (den->sum == 0) {
    f.message += "denominator " + format_range(den->range, true) + " is zero";
    return out.push_back(std::move(f));
  }
  double ratio = num->sum / den->sum;
  double measured = std::fabs(ratio - b.reference_ratio);
  double threshold = b.band_fraction * std::fabs(b.reference_ratio);
  if (measured <= threshold) return;
  f.message += "ratio " + format_general(ratio) + " is outside " +
               format_general(b.band_fraction * 100) + "% of the reference " +
               format_general(b.reference_ratio);
  f.measured = measured;
  f.threshold = threshold;
  out.push_back(std::move(f));
}

}  // namespace

std::vector<Finding> check_assertions(const AuditContext& ctx) {
  std::vector<Finding> out;
  if (ctx.config.enabled("R7")) {
    for (const AssertionSpec& a : ctx.config.assertions) check_one(ctx, a, out);
  }
  if (ctx.config.enabled("R8")) {
    for (const RatioBand& b : ctx.config.ratio_bands) check_band(ctx, b, out);
  }
  return out;
}

}  // namespace sheetcheck
