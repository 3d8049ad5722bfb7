/*
 * Copyright (c) 2026 The extpass Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <deque>
#include <set>
#include <vector>

#include "extpass/ast_index.hpp"

namespace extpass {

// Transitive call closure of a message handler: the handler, every function
// reachable from it through the functions table, and every call made inside
// any of them (nested function expressions included).
struct HandlerClosure {
  FunctionRef root;
  std::vector<FunctionRef> reached;     // BFS order, root first
  std::vector<CallRecord> constructs;   // deduplicated, discovery order
};

namespace detail {

inline bool node_within(const js::Node& inner, const js::Node& outer) {
  return inner.begin >= outer.begin && inner.end <= outer.end;
}

}  // namespace detail

// Breadth-first expansion: each reached function contributes the calls that
// are lexically inside it; any call whose key has functions-table entries
// pulls those functions in. A visited set makes recursion and mutual
// recursion terminate. A per-unit offset index keeps the containment scan
// proportional to each function's own size.
inline HandlerClosure expand_handler(FunctionRef root,
                                     const IndexedTables& tables) {
  HandlerClosure closure;
  closure.root = root;
  if (!root.fn) return closure;

  std::map<int, std::vector<const CallRecord*>> calls_by_unit;
  for (const auto& [key, records] : tables.calls)
    for (const CallRecord& rec : records)
      if (rec.node) calls_by_unit[rec.where.unit].push_back(&rec);
  for (auto& [unit, records] : calls_by_unit) {
    std::sort(records.begin(), records.end(),
              [](const CallRecord* a, const CallRecord* b) {
                if (a->node->begin != b->node->begin)
                  return a->node->begin < b->node->begin;
                return a->path.key() < b->path.key();
              });
  }

  std::set<const js::Node*> visited;
  std::set<std::pair<const js::Node*, std::string>> seen_calls;
  std::deque<FunctionRef> frontier;
  visited.insert(root.fn);
  frontier.push_back(root);

  while (!frontier.empty()) {
    FunctionRef fn = frontier.front();
    frontier.pop_front();
    closure.reached.push_back(fn);

    auto unit_it = calls_by_unit.find(fn.unit);
    if (unit_it == calls_by_unit.end()) continue;
    const std::vector<const CallRecord*>& records = unit_it->second;
    auto from = std::lower_bound(
        records.begin(), records.end(), fn.fn->begin,
        [](const CallRecord* r, uint32_t begin) { return r->node->begin < begin; });
    for (auto it = from; it != records.end() && (*it)->node->begin < fn.fn->end;
         ++it) {
      const CallRecord& rec = **it;
      if (!detail::node_within(*rec.node, *fn.fn)) continue;
      const std::string key = rec.path.key();
      if (seen_calls.insert({rec.node, key}).second)
        closure.constructs.push_back(rec);
      auto fit = tables.functions.find(key);
      if (fit == tables.functions.end()) continue;
      for (const FunctionRecord& target : fit->second) {
        if (target.fn && visited.insert(target.fn).second)
          frontier.push_back(FunctionRef{target.fn, target.where.unit});
      }
    }
  }
  return closure;
}

}  // namespace extpass
