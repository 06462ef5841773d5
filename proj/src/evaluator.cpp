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
#include <set>

#include "eval_internal.hpp"
#include "sheetcheck/recalc.hpp"

namespace sheetcheck {

namespace detail {

CellValue deref(const Operand& op, EvalContext& ctx) {
  if (auto* v = std::get_if<CellValue>(&op)) return *v;
  const RangeRef& r = std::get<RefValue>(op).range;
  if (r.whole_column || r.start.row != r.end.row ||
      r.start.col != r.end.col) {
    return CellValue::error(ErrorCode::kValue);
  }
  return ctx.value_at(r.start);
}

std::variant<double, ErrorCode> to_number(const CellValue& v) {
  if (v.is_number()) return v.as_number();
  if (v.is_blank()) return 0.0;
  if (v.is_bool()) return v.as_bool() ? 1.0 : 0.0;
  if (v.is_error()) return v.as_error();
  if (auto d = parse_numeric_text(v.as_text())) return *d;
  return ErrorCode::kValue;
}

}  // namespace detail

namespace {

using detail::deref;
using detail::to_number;

CellValue number_result(double d) {
  if (!std::isfinite(d)) return CellValue::error(ErrorCode::kNum);
  if (d == 0) d = 0.0;  // no negative zero
  return CellValue::number(d);
}

// -1, 0, 1 ordering with Excel's cross-type rule: numbers < text < bools.
int compare_values(const CellValue& a, const CellValue& b) {
  auto rank = [](const CellValue& v) {
    if (v.is_number()) return 0;
    if (v.is_text()) return 1;
    return 2;
  };
  CellValue x = a;
  CellValue y = b;
  if (x.is_blank() && y.is_blank()) return 0;
  if (x.is_blank()) {
    x = y.is_text() ? CellValue::text("")
        : y.is_bool() ? CellValue::boolean(false)
                      : CellValue::number(0);
  }
  if (y.is_blank()) {
    y = x.is_text() ? CellValue::text("")
        : x.is_bool() ? CellValue::boolean(false)
                      : CellValue::number(0);
  }
  int rx = rank(x);
  int ry = rank(y);
  if (rx != ry) return rx < ry ? -1 : 1;
  if (x.is_number()) {
    double p = x.as_number();
    double q = y.as_number();
    return p < q ? -1 : (p > q ? 1 : 0);
  }
  if (x.is_text()) {
    std::string p = x.as_text();
    std::string q = y.as_text();
    for (auto& c : p) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (auto& c : q) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return p < q ? -1 : (p > q ? 1 : 0);
  }
  return x.as_bool() == y.as_bool() ? 0 : (x.as_bool() ? 1 : -1);
}

CellValue binary_op(BinaryOp op, const CellValue& a, const CellValue& b) {
  if (a.is_error()) return a;
  if (b.is_error()) return b;
  if (op == BinaryOp::kConcat) {
    return CellValue::text(display_text(a) + display_text(b));
  }
  if (is_comparison(op)) {
    int c = compare_values(a, b);
    bool r = false;
    switch (op) {
      case BinaryOp::kEq: r = c == 0; break;
      case BinaryOp::kNe: r = c != 0; break;
      case BinaryOp::kLt: r = c < 0; break;
      case BinaryOp::kLe: r = c <= 0; break;
      case BinaryOp::kGt: r = c > 0; break;
      case BinaryOp::kGe: r = c >= 0; break;
      default: break;
    }
    return CellValue::boolean(r);
  }
  auto x = to_number(a);
  if (auto* e = std::get_if<ErrorCode>(&x)) return CellValue::error(*e);
  auto y = to_number(b);
  if (auto* e = std::get_if<ErrorCode>(&y)) return CellValue::error(*e);
  double p = std::get<double>(x);
  double q = std::get<double>(y);
  switch (op) {
    case BinaryOp::kAdd:
      return number_result(p + q);
    case BinaryOp::kSub:
      return number_result(p - q);
    case BinaryOp::kMul:
      return number_result(p * q);
    case BinaryOp::kDiv:
      if (q == 0) return CellValue::error(ErrorCode::kDiv0);
      return number_result(p / q);
    case BinaryOp::kPow:
      if (p == 0 && q == 0) return CellValue::error(ErrorCode::kNum);
      if (p == 0 && q < 0) return CellValue::error(ErrorCode::kDiv0);
      return number_result(std::pow(p, q));
    default:
      return CellValue::error(ErrorCode::kValue);
  }
}

class Evaluator : public EvalContext {
 public:
  Evaluator(const Workbook& wb, const DepGraph& graph)
      : wb_(wb), graph_(graph) {}

  ValueMap run() {
    for (const Sheet& sheet : wb_.sheets()) {
      for (const auto& [pos, cell] : sheet.cells()) {
        if (!cell.formula) {
          values_.set(cell.address, cell.value, Provenance::kStored);
        }
      }
    }
    for (const CellAddress& a : graph_.cyclic) {
      values_.set(a, CellValue::error(ErrorCode::kCirc), Provenance::kComputed);
      done_.insert(a);
    }
    for (const CellAddress& a : graph_.order) value_at(a);
    return std::move(values_);
  }

  const Workbook& workbook() const override { return wb_; }
  const CellAddress& current_cell() const override { return *current_; }

  CellValue value_at(const CellAddress& raw) override {
    auto canon = wb_.canonical(raw);
    if (!canon) return CellValue::error(ErrorCode::kRef);
    CellAddress a = *canon;
    a.col_absolute = a.row_absolute = false;
    const Cell* cell = wb_.find_cell(a);
    if (!cell) return CellValue();
    if (!cell->formula) return cell->value;
    if (done_.count(a)) return values_.at(a);
    // Re-entering a cell under evaluation means the cycle only shows up
    // once dynamic references are resolved.
    if (in_progress_.count(a)) return CellValue::error(ErrorCode::kCirc);

    in_progress_.insert(a);
    const CellAddress* saved = current_;
    current_ = &cell->address;
    CellValue result = deref(eval(*cell->formula), *this);
    current_ = saved;
    in_progress_.erase(a);

    if (result.is_blank()) result = CellValue::number(0);
    if (result.is_number()) result = number_result(result.as_number());
    values_.set(a, result, Provenance::kComputed);
    done_.insert(a);
    return result;
  }

 private:
  Operand eval(const Node& n) {
    if (auto* x = n.as<ast::NumberLit>()) return CellValue::number(x->value);
    if (auto* x = n.as<ast::TextLit>()) return CellValue::text(x->value);
    if (auto* x = n.as<ast::BoolLit>()) return CellValue::boolean(x->value);
    if (auto* x = n.as<ast::ErrorLit>()) return CellValue::error(x->code);
    if (n.is<ast::Name>()) return CellValue::error(ErrorCode::kName);
    if (auto* p = n.as<ast::Paren>()) return eval(*p->child);
    if (auto* r = n.as<ast::Ref>()) {
      auto a = wb_.canonical(r->address);
      if (!a) return CellValue::error(ErrorCode::kRef);
      return RefValue{RangeRef{*a, *a, false}};
    }
    if (auto* r = n.as<ast::Range>()) return eval_range(*r);
    if (auto* u = n.as<ast::Unary>()) {
      CellValue v = deref(eval(*u->child), *this);
      auto num = to_number(v);
      if (auto* e = std::get_if<ErrorCode>(&num)) return CellValue::error(*e);
      double d = std::get<double>(num);
      return number_result(u->op == UnaryOp::kNeg ? -d : d / 100.0);
    }
    if (auto* b = n.as<ast::Binary>()) {
      CellValue lhs = deref(eval(*b->lhs), *this);
      CellValue rhs = deref(eval(*b->rhs), *this);
      return binary_op(b->op, lhs, rhs);
    }
    const auto& call = *n.as<ast::Call>();
    if (call.name == "IF") return eval_if(call);
    std::vector<Operand> args;
    args.reserve(call.args.size());
    for (auto& a : call.args) args.push_back(eval(*a));
    return apply_function(call.name, args, *this);
  }

  // Branches are evaluated lazily, so an untaken branch cannot raise.
  Operand eval_if(const ast::Call& call) {
    if (call.args.size() < 2 || call.args.size() > 3) {
      return CellValue::error(ErrorCode::kValue);
    }
    CellValue cond = deref(eval(*call.args[0]), *this);
    if (cond.is_error()) return cond;
    bool truth = false;
    if (cond.is_text()) {
      if (iequals(cond.as_text(), "TRUE")) truth = true;
      else if (iequals(cond.as_text(), "FALSE")) truth = false;
      else return CellValue::error(ErrorCode::kValue);
    } else {
      truth = std::get<double>(to_number(cond)) != 0;
    }
    if (truth) return eval(*call.args[1]);
    if (call.args.size() == 3) return eval(*call.args[2]);
    return CellValue::boolean(false);
  }

  Operand eval_range(const ast::Range& r) {
    if (auto fixed = static_range(r)) {
      if (!iequals(fixed->start.sheet, fixed->end.sheet)) {
        return CellValue::error(ErrorCode::kRef);
      }
      auto s = wb_.canonical(fixed->start);
      if (!s) return CellValue::error(ErrorCode::kRef);
      fixed->start.sheet = s->sheet;
      fixed->end.sheet = s->sheet;
      return RefValue{*fixed};
    }
    Operand start = eval(*r.start);
    Operand end = eval(*r.end);
    auto* a = std::get_if<RefValue>(&start);
    auto* b = std::get_if<RefValue>(&end);
    if (!a) return deref_error(start);
    if (!b) return deref_error(end);
    if (a->range.start.sheet != b->range.start.sheet) {
      return CellValue::error(ErrorCode::kRef);
    }
    RangeRef out;
    out.start = a->range.start;
    out.end = a->range.end;
    out.start.row = std::min(a->range.start.row, b->range.start.row);
    out.start.col = std::min(a->range.start.col, b->range.start.col);
    out.end.row = std::max(a->range.end.row, b->range.end.row);
    out.end.col = std::max(a->range.end.col, b->range.end.col);
    return RefValue{out};
  }

  static Operand deref_error(const Operand& op) {
    const CellValue& v = std::get<CellValue>(op);
    return v.is_error() ? v : CellValue::error(ErrorCode::kValue);
  }

  const Workbook& wb_;
  const DepGraph& graph_;
  ValueMap values_;
  std::set<CellAddress> done_;
  std::set<CellAddress> in_progress_;
  const CellAddress* current_ = nullptr;
};

}  // namespace

const CellValue& ValueMap::at(const CellAddress& a) const {
  static const CellValue kBlank;
  CellAddress key = a;
  key.col_absolute = key.row_absolute = false;
  auto it = entries_.find(key);
  return it == entries_.end() ? kBlank : it->second.value;
}

std::optional<Provenance> ValueMap::provenance(const CellAddress& a) const {
  auto it = entries_.find(a);
  if (it == entries_.end()) return std::nullopt;
  return it->second.provenance;
}

bool operator==(const ValueMap& a, const ValueMap& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  auto i = a.entries_.begin();
  auto j = b.entries_.begin();
  for (; i != a.entries_.end(); ++i, ++j) {
    if (!(i->first == j->first) || !(i->second.value == j->second.value) ||
        i->second.provenance != j->second.provenance) {
      return false;
    }
  }
  return true;
}

ValueMap recalculate(const Workbook& wb) {
  return recalculate(wb, build_graph(wb));
}

ValueMap recalculate(const Workbook& wb, const DepGraph& graph) {
  return Evaluator(wb, graph).run();
}

}  // namespace sheetcheck
