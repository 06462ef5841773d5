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

#include <algorithm>
#include <unordered_map>

#include "sheetcheck/recalc.hpp"

namespace sheetcheck {

namespace {

class PrecedentCollector {
 public:
  PrecedentCollector(const Workbook& wb, const CellAddress& self,
                     DepGraph& graph)
      : wb_(wb), self_(self), graph_(graph) {}

  void walk(const Node& n, bool reference_only) {
    if (auto* r = n.as<ast::Ref>()) {
      auto a = wb_.canonical(r->address);
      if (!a) return;
      a->col_absolute = a->row_absolute = false;
      (reference_only ? graph_.anchors : graph_.edges)[self_].insert(*a);
      return;
    }
    if (auto* range = n.as<ast::Range>()) {
      auto fixed = static_range(*range);
      if (!fixed) {
        graph_.dynamic_nodes.insert(self_);
        walk(*range->start, true);
        walk(*range->end, true);
        return;
      }
      add_range(*fixed, reference_only);
      return;
    }
    if (auto* u = n.as<ast::Unary>()) return walk(*u->child, reference_only);
    if (auto* b = n.as<ast::Binary>()) {
      walk(*b->lhs, reference_only);
      walk(*b->rhs, reference_only);
      return;
    }
    if (auto* p = n.as<ast::Paren>()) return walk(*p->child, reference_only);
    if (auto* c = n.as<ast::Call>()) {
      bool offset_like = c->name == "OFFSET" || c->name == "INDEX";
      bool position_only = c->name == "ROW" || c->name == "COLUMN";
      if (offset_like) graph_.dynamic_nodes.insert(self_);
      for (std::size_t i = 0; i < c->args.size(); ++i) {
        bool ref_arg = position_only || (offset_like && i == 0);
        walk(*c->args[i], reference_only || ref_arg);
      }
    }
  }

 private:
  void add_range(const RangeRef& range, bool reference_only) {
    if (!iequals(range.start.sheet, range.end.sheet)) return;
    const Sheet* sheet = wb_.find_sheet(range.start.sheet);
    if (!sheet) return;
    RangeRef r = clip_to_used(wb_, range);
    auto& target = (reference_only ? graph_.anchors : graph_.edges)[self_];
    // Only cells that exist can be formula cells; absent ones are blank.
    auto it = sheet->cells().lower_bound(GridPos{r.start.row, r.start.col});
    auto end = sheet->cells().upper_bound(GridPos{r.end.row, r.end.col});
    for (; it != end; ++it) {
      const GridPos& pos = it->first;
      if (pos.col < r.start.col || pos.col > r.end.col) continue;
      target.insert(CellAddress{sheet->name(), pos.col, pos.row});
    }
  }

  const Workbook& wb_;
  const CellAddress& self_;
  DepGraph& graph_;
};

// Iterative Tarjan SCC. Emits components precedents-first.
class SccFinder {
 public:
  explicit SccFinder(const std::vector<std::vector<std::size_t>>& adj)
      : adj_(adj),
        index_(adj.size(), kUnvisited),
        low_(adj.size(), 0),
        on_stack_(adj.size(), false) {}

  std::vector<std::vector<std::size_t>> run() {
    for (std::size_t v = 0; v < adj_.size(); ++v) {
      if (index_[v] == kUnvisited) visit(v);
    }
    return std::move(components_);
  }

 private:
  static constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);

  void visit(std::size_t root) {
    std::vector<std::pair<std::size_t, std::size_t>> work{{root, 0}};
    while (!work.empty()) {
      auto& [v, next_edge] = work.back();
      if (next_edge == 0 && index_[v] == kUnvisited) {
        index_[v] = low_[v] = counter_++;
        stack_.push_back(v);
        on_stack_[v] = true;
      }
      if (next_edge < adj_[v].size()) {
        std::size_t w = adj_[v][next_edge++];
        if (index_[w] == kUnvisited) {
          work.emplace_back(w, 0);
        } else if (on_stack_[w]) {
          low_[v] = std::min(low_[v], index_[w]);
        }
        continue;
      }
      if (low_[v] == index_[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack_.back();
          stack_.pop_back();
          on_stack_[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components_.push_back(std::move(comp));
      }
      std::size_t finished = v;
      work.pop_back();
      if (!work.empty()) {
        std::size_t parent = work.back().first;
        low_[parent] = std::min(low_[parent], low_[finished]);
      }
    }
  }

  const std::vector<std::vector<std::size_t>>& adj_;
  std::vector<std::size_t> index_;
  std::vector<std::size_t> low_;
  std::vector<bool> on_stack_;
  std::vector<std::size_t> stack_;
  std::vector<std::vector<std::size_t>> components_;
  std::size_t counter_ = 0;
};

}  // namespace

DepGraph build_graph(const Workbook& wb) {
  DepGraph graph;
  std::vector<CellAddress> nodes;
  for (const Sheet& sheet : wb.sheets()) {
    for (const auto& [pos, cell] : sheet.cells()) {
      if (!cell.formula) continue;
      nodes.push_back(cell.address);
      graph.edges[cell.address];  // formula cells always have an entry
      PrecedentCollector(wb, nodes.back(), graph).walk(*cell.formula, false);
    }
  }
  for (auto it = graph.anchors.begin(); it != graph.anchors.end();) {
    it = it->second.empty() ? graph.anchors.erase(it) : std::next(it);
  }

  std::map<CellAddress, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  std::vector<bool> self_loop(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const CellAddress& p : graph.edges[nodes[i]]) {
      auto it = index.find(p);
      if (it == index.end()) continue;
      adj[i].push_back(it->second);
      if (it->second == i) self_loop[i] = true;
    }
  }

  for (auto& comp : SccFinder(adj).run()) {
    if (comp.size() > 1 || self_loop[comp.front()]) {
      for (std::size_t v : comp) graph.cyclic.insert(nodes[v]);
    } else {
      graph.order.push_back(nodes[comp.front()]);
    }
  }
  return graph;
}

}  // namespace sheetcheck
