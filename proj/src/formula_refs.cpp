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

#include "sheetcheck/formula.hpp"

namespace sheetcheck {

namespace {

void collect(const NodePtr& node, RefSet& out) {
  const Node& n = *node;
  if (auto* r = n.as<ast::Ref>()) {
    out.cells.insert(r->address);
  } else if (auto* range = n.as<ast::Range>()) {
    if (auto fixed = static_range(*range)) {
      out.ranges.insert(*fixed);
    } else {
      out.dynamic.push_back(node);
      // Anchors of the dynamic endpoints are still ordinary references.
      collect(range->start, out);
      collect(range->end, out);
    }
  } else if (auto* u = n.as<ast::Unary>()) {
    collect(u->child, out);
  } else if (auto* b = n.as<ast::Binary>()) {
    collect(b->lhs, out);
    collect(b->rhs, out);
  } else if (auto* c = n.as<ast::Call>()) {
    for (auto& a : c->args) collect(a, out);
  } else if (auto* p = n.as<ast::Paren>()) {
    collect(p->child, out);
  }
}

std::optional<CellAddress> shift_address(CellAddress a, int drows,
                                         int dcols) {
  if (!a.row_absolute) a.row += drows;
  if (!a.col_absolute) a.col += dcols;
  if (a.row < 1 || a.row > kMaxRow || a.col < 1 || a.col > kMaxCol) {
    return std::nullopt;
  }
  return a;
}

}  // namespace

RefSet extract_references(const NodePtr& node) {
  RefSet out;
  if (node) collect(node, out);
  return out;
}

NodePtr shift_relative(const NodePtr& node, int drows, int dcols) {
  const Node& n = *node;
  if (auto* r = n.as<ast::Ref>()) {
    auto moved = shift_address(r->address, drows, dcols);
    if (!moved) return make_error(ErrorCode::kRef);
    return make_ref(*moved, r->sheet_explicit);
  }
  if (auto* range = n.as<ast::Range>()) {
    if (range->whole_column) {
      auto* s = range->start->as<ast::Ref>();
      auto* e = range->end->as<ast::Ref>();
      auto ms = shift_address(s->address, 0, dcols);
      auto me = shift_address(e->address, 0, dcols);
      if (!ms || !me) return make_error(ErrorCode::kRef);
      return make_range(make_ref(*ms, s->sheet_explicit),
                        make_ref(*me, e->sheet_explicit), true);
    }
    NodePtr start = shift_relative(range->start, drows, dcols);
    NodePtr end = shift_relative(range->end, drows, dcols);
    if (start->is<ast::ErrorLit>()) return start;
    if (end->is<ast::ErrorLit>()) return end;
    return make_range(start, end, false);
  }
  if (auto* u = n.as<ast::Unary>()) {
    return make_unary(u->op, shift_relative(u->child, drows, dcols));
  }
  if (auto* b = n.as<ast::Binary>()) {
    return make_binary(b->op, shift_relative(b->lhs, drows, dcols),
                       shift_relative(b->rhs, drows, dcols));
  }
  if (auto* c = n.as<ast::Call>()) {
    std::vector<NodePtr> args;
    for (auto& a : c->args) args.push_back(shift_relative(a, drows, dcols));
    return make_call(c->name, std::move(args));
  }
  if (auto* p = n.as<ast::Paren>()) {
    return make_paren(shift_relative(p->child, drows, dcols));
  }
  return node;
}

}  // namespace sheetcheck
