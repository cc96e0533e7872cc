// Copyright 2026 The layerfid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "layerfid/graph.hpp"

#include <algorithm>
#include <string>

#include "layerfid/error.hpp"
#include "layerfid/noise.hpp"

namespace lfd {

CouplingGraph::CouplingGraph(std::set<int> nodes, const std::vector<std::pair<int, int>>& edges)
    : nodes_(std::move(nodes)) {
  for (const auto& [a, b] : edges) add_edge(a, b);
}

CouplingGraph CouplingGraph::from_snapshot(const CalibrationSnapshot& snapshot) {
  CouplingGraph g;
  for (const auto& [index, cal] : snapshot.qubits) g.add_node(index);
  for (const auto& e : snapshot.edges) g.add_edge(e.a, e.b);
  return g;
}

void CouplingGraph::add_node(int node) { nodes_.insert(node); }

void CouplingGraph::add_edge(int a, int b) {
  if (a == b) throw Error(ErrorCode::InvalidArgument, "self-loop on node " + std::to_string(a));
  nodes_.insert(a);
  nodes_.insert(b);
  if (!edges_.insert(std::minmax(a, b)).second) return;
  for (auto [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
    auto& list = adjacency_[from];
    list.insert(std::upper_bound(list.begin(), list.end(), to), to);
  }
}

bool CouplingGraph::has_edge(int a, int b) const { return edges_.contains(std::minmax(a, b)); }

const std::vector<int>& CouplingGraph::neighbors(int node) const {
  static const std::vector<int> kNone;
  const auto it = adjacency_.find(node);
  return it == adjacency_.end() ? kNone : it->second;
}

int CouplingGraph::degree(int node) const { return static_cast<int>(neighbors(node).size()); }

bool CouplingGraph::is_subgraph_of(const CouplingGraph& other) const {
  return std::includes(other.nodes_.begin(), other.nodes_.end(), nodes_.begin(), nodes_.end()) &&
         std::includes(other.edges_.begin(), other.edges_.end(), edges_.begin(), edges_.end());
}

} // namespace lfd
