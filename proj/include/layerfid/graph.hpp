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

#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

namespace lfd {

struct CalibrationSnapshot;

/// Undirected simple graph over physical qubit indices. Edges are stored
/// with the smaller endpoint first.
class CouplingGraph {
public:
  CouplingGraph() = default;
  CouplingGraph(std::set<int> nodes, const std::vector<std::pair<int, int>>& edges);

  static CouplingGraph from_snapshot(const CalibrationSnapshot& snapshot);

  void add_node(int node);
  /// Adds both endpoints as nodes. Throws InvalidArgument on self-loops.
  void add_edge(int a, int b);

  const std::set<int>& nodes() const noexcept { return nodes_; }
  const std::set<std::pair<int, int>>& edges() const noexcept { return edges_; }
  bool has_node(int node) const { return nodes_.contains(node); }
  bool has_edge(int a, int b) const;
  /// Sorted neighbour list; empty for unknown nodes.
  const std::vector<int>& neighbors(int node) const;
  int degree(int node) const;

  /// True when every node and edge of *this also belongs to `other`.
  bool is_subgraph_of(const CouplingGraph& other) const;

  friend bool operator==(const CouplingGraph&, const CouplingGraph&) = default;

private:
  std::set<int> nodes_;
  std::set<std::pair<int, int>> edges_;
  std::map<int, std::vector<int>> adjacency_;
};

} // namespace lfd
