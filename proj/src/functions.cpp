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
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>

#include "eval_internal.hpp"
#include "sheetcheck/recalc.hpp"

namespace sheetcheck {

namespace {

using detail::deref;
using detail::for_each_present;
using detail::to_number;
using Args = std::span<const Operand>;
using NumberOrError = std::variant<double, ErrorCode>;

CellValue err(ErrorCode e) { return CellValue::error(e); }

CellValue num(double d) {
  if (!std::isfinite(d)) return err(ErrorCode::kNum);
  if (d == 0) d = 0.0;
  return CellValue::number(d);
}

NumberOrError scalar_number(const Operand& op, EvalContext& ctx) {
  return to_number(deref(op, ctx));
}

// Truncates toward zero, as Excel does for integer arguments.
std::variant<int, ErrorCode> scalar_int(const Operand& op, EvalContext& ctx) {
  auto n = scalar_number(op, ctx);
  if (auto* e = std::get_if<ErrorCode>(&n)) return *e;
  double d = std::trunc(std::get<double>(n));
  if (d > 2147483647.0 || d < -2147483648.0) return ErrorCode::kNum;
  return static_cast<int>(d);
}

// Feeds every number an aggregate sees. References contribute only stored
// or computed numbers (text, bools and blanks are skipped); scalar arguments
// are coerced. Returns the first error met.
std::optional<ErrorCode> collect_numbers(
    Args args, EvalContext& ctx, const std::function<void(double)>& sink,
    const std::function<bool(const Cell&)>& skip = nullptr) {
  std::optional<ErrorCode> error;
  for (const Operand& op : args) {
    if (auto* ref = std::get_if<RefValue>(&op)) {
      for_each_present(ctx.workbook(), ref->range, [&](const Cell& cell) {
        if (skip && skip(cell)) return true;
        CellValue v = ctx.value_at(cell.address);
        if (v.is_error()) {
          error = v.as_error();
          return false;
        }
        if (v.is_number()) sink(v.as_number());
        return true;
      });
      if (error) return error;
      continue;
    }
    auto n = to_number(std::get<CellValue>(op));
    if (auto* e = std::get_if<ErrorCode>(&n)) return *e;
    sink(std::get<double>(n));
  }
  return std::nullopt;
}

CellValue fn_sum(Args args, EvalContext& ctx) {
  double total = 0;
  if (auto e = collect_numbers(args, ctx, [&](double d) { total += d; })) {
    return err(*e);
  }
  return num(total);
}

CellValue fn_average(Args args, EvalContext& ctx) {
  double total = 0;
  std::size_t count = 0;
  auto e = collect_numbers(args, ctx, [&](double d) {
    total += d;
    ++count;
  });
  if (e) return err(*e);
  if (count == 0) return err(ErrorCode::kDiv0);
  return num(total / static_cast<double>(count));
}

CellValue fn_count(Args args, EvalContext& ctx) {
  std::size_t count = 0;
  if (auto e = collect_numbers(args, ctx, [&](double) { ++count; })) {
    return err(*e);
  }
  return num(static_cast<double>(count));
}

CellValue fn_extreme(Args args, EvalContext& ctx, bool want_max) {
  std::optional<double> best;
  auto e = collect_numbers(args, ctx, [&](double d) {
    if (!best || (want_max ? d > *best : d < *best)) best = d;
  });
  if (e) return err(*e);
  return num(best.value_or(0));
}

CellValue fn_subtotal(Args args, EvalContext& ctx) {
  if (args.size() < 2) return err(ErrorCode::kValue);
  auto code = scalar_int(args[0], ctx);
  if (auto* e = std::get_if<ErrorCode>(&code)) return err(*e);
  if (std::get<int>(code) != 9) return err(ErrorCode::kValue);
  Args rest = args.subspan(1);
  for (const Operand& op : rest) {
    if (!std::holds_alternative<RefValue>(op)) {
      const CellValue& v = std::get<CellValue>(op);
      return v.is_error() ? v : err(ErrorCode::kValue);
    }
  }
  double total = 0;
  auto e = collect_numbers(
      rest, ctx, [&](double d) { total += d; },
      [](const Cell& cell) {
        return cell.formula && root_call_name(cell.formula) == "SUBTOTAL";
      });
  if (e) return err(*e);
  return num(total);
}

CellValue fn_if(Args args, EvalContext& ctx) {
  if (args.size() < 2 || args.size() > 3) return err(ErrorCode::kValue);
  CellValue cond = deref(args[0], ctx);
  if (cond.is_error()) return cond;
  bool truth = false;
  if (cond.is_text()) {
    if (iequals(cond.as_text(), "TRUE")) truth = true;
    else if (!iequals(cond.as_text(), "FALSE")) return err(ErrorCode::kValue);
  } else {
    truth = std::get<double>(to_number(cond)) != 0;
  }
  if (truth) return deref(args[1], ctx);
  if (args.size() == 3) return deref(args[2], ctx);
  return CellValue::boolean(false);
}

CellValue fn_abs(Args args, EvalContext& ctx) {
  if (args.size() != 1) return err(ErrorCode::kValue);
  auto n = scalar_number(args[0], ctx);
  if (auto* e = std::get_if<ErrorCode>(&n)) return err(*e);
  return num(std::fabs(std::get<double>(n)));
}

CellValue fn_round(Args args, EvalContext& ctx) {
  if (args.size() != 2) return err(ErrorCode::kValue);
  auto x = scalar_number(args[0], ctx);
  if (auto* e = std::get_if<ErrorCode>(&x)) return err(*e);
  auto d = scalar_int(args[1], ctx);
  if (auto* e = std::get_if<ErrorCode>(&d)) return err(*e);
  return num(round_decimal(std::get<double>(x), std::get<int>(d)));
}

CellValue fn_fixed(Args args, EvalContext& ctx, bool dollar) {
  if (args.empty() || args.size() > (dollar ? 2u : 3u)) {
    return err(ErrorCode::kValue);
  }
  auto x = scalar_number(args[0], ctx);
  if (auto* e = std::get_if<ErrorCode>(&x)) return err(*e);
  int digits = 2;
  if (args.size() >= 2) {
    auto d = scalar_int(args[1], ctx);
    if (auto* e = std::get_if<ErrorCode>(&d)) return err(*e);
    digits = std::get<int>(d);
  }
  bool commas = true;
  if (args.size() == 3) {
    auto flag = scalar_number(args[2], ctx);
    if (auto* e = std::get_if<ErrorCode>(&flag)) return err(*e);
    commas = std::get<double>(flag) == 0;
  }
  double v = std::get<double>(x);
  auto text = dollar ? render_dollar(v, digits) : render_fixed(v, digits, commas);
  if (!text) return err(ErrorCode::kValue);
  return CellValue::text(*text);
}

Operand fn_offset(Args args, EvalContext& ctx) {
  if (args.size() < 3 || args.size() > 5) return err(ErrorCode::kValue);
  auto* base = std::get_if<RefValue>(&args[0]);
  if (!base) {
    const CellValue& v = std::get<CellValue>(args[0]);
    return v.is_error() ? v : err(ErrorCode::kValue);
  }
  int values[4] = {0, 0, base->range.rows(), base->range.cols()};
  for (std::size_t i = 1; i < args.size(); ++i) {
    auto n = scalar_int(args[i], ctx);
    if (auto* e = std::get_if<ErrorCode>(&n)) return err(*e);
    values[i - 1] = std::get<int>(n);
  }
  auto [dr, dc, height, width] = values;
  if (height < 1 || width < 1) return err(ErrorCode::kRef);
  RangeRef out = base->range;
  out.whole_column = false;
  long long top = static_cast<long long>(out.start.row) + dr;
  long long left = static_cast<long long>(out.start.col) + dc;
  long long bottom = top + height - 1;
  long long right = left + width - 1;
  if (top < 1 || left < 1 || bottom > kMaxRow || right > kMaxCol) {
    return err(ErrorCode::kRef);
  }
  out.start.row = static_cast<int>(top);
  out.start.col = static_cast<int>(left);
  out.end.row = static_cast<int>(bottom);
  out.end.col = static_cast<int>(right);
  out.end.sheet = out.start.sheet;
  return RefValue{out};
}

Operand fn_index(Args args, EvalContext& ctx) {
  if (args.size() < 2 || args.size() > 3) return err(ErrorCode::kValue);
  auto* base = std::get_if<RefValue>(&args[0]);
  if (!base) {
    const CellValue& v = std::get<CellValue>(args[0]);
    return v.is_error() ? v : err(ErrorCode::kValue);
  }
  auto first = scalar_int(args[1], ctx);
  if (auto* e = std::get_if<ErrorCode>(&first)) return err(*e);
  int row = std::get<int>(first);
  int col = 1;
  const RangeRef& r = base->range;
  if (args.size() == 3) {
    auto second = scalar_int(args[2], ctx);
    if (auto* e = std::get_if<ErrorCode>(&second)) return err(*e);
    col = std::get<int>(second);
  } else if (r.rows() == 1 && r.cols() > 1 && !r.whole_column) {
    // One index into a single row counts across.
    col = row;
    row = 1;
  } else if (r.cols() > 1) {
    return err(ErrorCode::kRef);
  }
  if (row < 1 || col < 1 || row > r.rows() || col > r.cols()) {
    return err(ErrorCode::kRef);
  }
  CellAddress at = r.start;
  at.row = r.start.row + row - 1;
  at.col = r.start.col + col - 1;
  at.col_absolute = at.row_absolute = false;
  return RefValue{RangeRef{at, at, false}};
}

CellValue fn_position(Args args, EvalContext& ctx, bool row) {
  if (args.size() > 1) return err(ErrorCode::kValue);
  if (args.empty()) {
    const CellAddress& self = ctx.current_cell();
    return num(row ? self.row : self.col);
  }
  auto* ref = std::get_if<RefValue>(&args[0]);
  if (!ref) {
    const CellValue& v = std::get<CellValue>(args[0]);
    return v.is_error() ? v : err(ErrorCode::kValue);
  }
  return num(row ? ref->range.start.row : ref->range.start.col);
}

using Impl = std::function<Operand(Args, EvalContext&)>;

const std::map<std::string, Impl, std::less<>>& catalog() {
  static const std::map<std::string, Impl, std::less<>> table = {
      {"SUM", fn_sum},
      {"AVERAGE", fn_average},
      {"COUNT", fn_count},
      {"MIN", [](Args a, EvalContext& c) { return fn_extreme(a, c, false); }},
      {"MAX", [](Args a, EvalContext& c) { return fn_extreme(a, c, true); }},
      {"SUBTOTAL", fn_subtotal},
      {"IF", fn_if},
      {"ABS", fn_abs},
      {"ROUND", fn_round},
      {"FIXED", [](Args a, EvalContext& c) { return fn_fixed(a, c, false); }},
      {"DOLLAR", [](Args a, EvalContext& c) { return fn_fixed(a, c, true); }},
      {"OFFSET", fn_offset},
      {"INDEX", fn_index},
      {"ROW", [](Args a, EvalContext& c) { return fn_position(a, c, true); }},
      {"COLUMN",
       [](Args a, EvalContext& c) { return fn_position(a, c, false); }},
  };
  return table;
}

std::string group_thousands(const std::string& digits) {
  std::string out;
  int n = static_cast<int>(digits.size());
  for (int i = 0; i < n; ++i) {
    if (i > 0 && (n - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

}  // namespace

Operand apply_function(std::string_view name, std::span<const Operand> args,
                       EvalContext& ctx) {
  auto it = catalog().find(name);
  if (it == catalog().end()) return err(ErrorCode::kName);
  return it->second(args, ctx);
}

bool is_supported_function(std::string_view name) {
  return catalog().count(name) > 0;
}

double round_decimal(double x, int digits) {
  if (!std::isfinite(x) || x == 0) return x;
  // 15 significant digits: d.dddddddddddddde+XX
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.14e", std::fabs(x));
  std::string mantissa;
  mantissa += buf[0];
  mantissa.append(buf + 2, 14);
  int exponent = std::atoi(buf + 17);
  // Digits kept: those at or above the 10^-digits place.
  long long keep = static_cast<long long>(exponent) + 1 + digits;
  if (keep >= 15) return x;
  if (keep < 0) return 0.0;
  std::string kept = mantissa.substr(0, static_cast<std::size_t>(keep));
  bool round_up = mantissa[static_cast<std::size_t>(keep)] >= '5';
  if (round_up) {
    int i = static_cast<int>(kept.size()) - 1;
    while (i >= 0 && kept[i] == '9') kept[i--] = '0';
    if (i >= 0) {
      ++kept[i];
    } else {
      kept.insert(kept.begin(), '1');
    }
  }
  if (kept.empty()) return 0.0;
  std::string text = kept + "e" + std::to_string(-digits);
  double r = std::strtod(text.c_str(), nullptr);
  return x < 0 ? -r : r;
}

std::optional<std::string> render_fixed(double x, int digits, bool commas) {
  if (digits > 127 || !std::isfinite(x)) return std::nullopt;
  double r = round_decimal(x, digits);
  int decimals = std::max(digits, 0);
  int size = std::snprintf(nullptr, 0, "%.*f", decimals, std::fabs(r));
  std::string text(static_cast<std::size_t>(size) + 1, '\0');
  std::snprintf(text.data(), text.size(), "%.*f", decimals, std::fabs(r));
  text.resize(static_cast<std::size_t>(size));
  if (commas) {
    auto dot = text.find('.');
    std::string whole = text.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : text.substr(dot);
    text = group_thousands(whole) + frac;
  }
  if (r < 0) text.insert(text.begin(), '-');
  return text;
}

std::optional<std::string> render_dollar(double x, int digits) {
  auto body = render_fixed(std::fabs(x), digits, true);
  if (!body) return std::nullopt;
  if (round_decimal(x, digits) < 0) return "($" + *body + ")";
  return "$" + *body;
}

}  // namespace sheetcheck
