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

/**
 * @file    layout.hpp
 * @brief   Qubit selection: calibration filtering, 3-qubit path enumeration,
 *          subgraph matching and noise scoring of layouts.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "layerfid/circuits.hpp"
#include "layerfid/graph.hpp"
#include "layerfid/noise.hpp"

namespace lfd {

/// A qubit survives when t1 >= t1_min, t2 >= t2_min, err_1q < e1q_max and
/// mean readout error < ero_max. An edge survives when both endpoints do
/// and err_2q < e2q_max. The defaults admit everything.
struct FilterThresholds {
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double t1_min = 0.0;
  double t2_min = 0.0;
  double e1q_max = kInf;
  double e2q_max = kInf;
  double ero_max = kInf;

  static FilterThresholds admit_all() { return {}; }
  /// Throws InvalidArgument on negative or NaN fields.
  void validate() const;
  /// True when every field is at least as strict as in `looser`.
  bool at_least_as_tight_as(const FilterThresholds& looser) const;

  friend bool operator==(const FilterThresholds&, const FilterThresholds&) = default;
};

/// Cumulative stages: T1 >= 30, T2 >= 15, e1q < 1%, e2q < 10%; then
/// readout < 5%; then e2q < 1%, 0.5%, 0.3%.
std::vector<FilterThresholds> default_cascade_stages();

enum class LayoutKind { Path3, Subgraph6 };

std::string_view to_string(LayoutKind kind);

struct LayoutCandidate {
  /// mapping[i] is the physical qubit carrying logical qubit i.
  std::vector<int> mapping;
  double score = 0.0;
  LayoutKind kind = LayoutKind::Path3;

  /// "a-b-c"
  std::string label() const;
  friend bool operator==(const LayoutCandidate&, const LayoutCandidate&) = default;
};

CouplingGraph filter_graph(const CalibrationSnapshot& snapshot, const FilterThresholds& th);

/// Every path a-b-c with a < c, in lexicographic order of (a, b, c).
std::vector<LayoutCandidate> enumerate_paths3(const CouplingGraph& g);

/// Sum over the circuit's native ops of -ln(1 - eps): err_1q for SX/X,
/// err_2q for CZ, mean readout error for MEASURE. RZ and conditional Pauli
/// frame updates are free. Logical circuits are rewritten to native form
/// first; qubit i is placed on cand.mapping[i].
double score_layout(const LayoutCandidate& cand, const Circuit& circuit,
                    const CalibrationSnapshot& snapshot);

/// Scores a mapping of pattern nodes (in sorted node order) onto the graph.
using EmbeddingScorer = std::function<double(const std::vector<int>& mapping)>;

/// All monomorphisms of `pattern` into `g`: mapping[k] is the image of the
/// k-th pattern node in sorted order. Output is in backtracking order.
std::vector<std::vector<int>> enumerate_embeddings(const CouplingGraph& g, const CouplingGraph& pattern);

/// Minimum-score embedding. Candidates are shuffled by a permutation seeded
/// with `seed` before a first-minimum scan, so equal scores resolve
/// reproducibly. Throws NoEmbedding when none exists.
LayoutCandidate subgraph_match(const CouplingGraph& g, const CouplingGraph& pattern,
                               const EmbeddingScorer& scorer, std::uint64_t seed);

/// Matches the circuit's interaction graph and scores with score_layout.
LayoutCandidate subgraph_match(const CouplingGraph& g, const Circuit& circuit,
                               const CalibrationSnapshot& snapshot, std::uint64_t seed);

/// Default scorer for bare patterns: -ln(1 - err_2q) over pattern edges
/// plus -ln(1 - err_1q) over pattern nodes.
EmbeddingScorer edge_error_scorer(const CouplingGraph& pattern, const CalibrationSnapshot& snapshot);

/// Index of the first minimum of `scores` after a seeded shuffle of the
/// indices; scores within 1e-12 of each other count as equal.
std::size_t seeded_argmin(const std::vector<double>& scores, std::uint64_t seed);

} // namespace lfd
