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

#include "layerfid/layout.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "layerfid/error.hpp"

namespace lfd {

namespace {

constexpr double kTieTol = 1e-12;

double nll(double eps) { return -std::log1p(-eps); }

bool node_passes(const QubitCal& q, const FilterThresholds& th) {
  return q.t1_us >= th.t1_min && q.t2_us >= th.t2_min && q.err_1q < th.e1q_max &&
         q.mean_readout_error() < th.ero_max;
}

// Pattern node visiting order: most constrained first, so that every node
// after the first has an already-placed neighbour when the pattern is
// connected.
std::vector<int> match_order(const CouplingGraph& pattern) {
  std::vector<int> order;
  std::set<int> placed;
  const auto& nodes = pattern.nodes();
  while (order.size() < nodes.size()) {
    int best = -1;
    int best_links = -1;
    int best_degree = -1;
    for (int u : nodes) {
      if (placed.contains(u)) continue;
      int links = 0;
      for (int w : pattern.neighbors(u)) links += placed.contains(w) ? 1 : 0;
      const int deg = pattern.degree(u);
      if (links > best_links || (links == best_links && deg > best_degree)) {
        best = u;
        best_links = links;
        best_degree = deg;
      }
    }
    order.push_back(best);
    placed.insert(best);
  }
  return order;
}

struct Matcher {
  const CouplingGraph& g;
  const CouplingGraph& pattern;
  std::vector<int> order;
  std::map<int, int> image;
  std::set<int> used;
  std::vector<std::vector<int>> found;

  void extend(std::size_t depth) {
    if (depth == order.size()) {
      std::vector<int> mapping;
      for (int u : pattern.nodes()) mapping.push_back(image.at(u));
      found.push_back(std::move(mapping));
      return;
    }
    const int u = order[depth];
    const int need = pattern.degree(u);
    std::vector<int> anchors;
    for (int w : pattern.neighbors(u)) {
      if (image.contains(w)) anchors.push_back(image.at(w));
    }
    const std::vector<int> pool = anchors.empty()
                                      ? std::vector<int>(g.nodes().begin(), g.nodes().end())
                                      : g.neighbors(anchors.front());
    for (int v : pool) {
      if (used.contains(v) || g.degree(v) < need) continue;
      const bool consistent = std::all_of(anchors.begin(), anchors.end(),
                                          [&](int a) { return g.has_edge(a, v); });
      if (!consistent) continue;
      image[u] = v;
      used.insert(v);
      extend(depth + 1);
      used.erase(v);
      image.erase(u);
    }
  }
};

} // namespace

void FilterThresholds::validate() const {
  for (double v : {t1_min, t2_min, e1q_max, e2q_max, ero_max}) {
    if (std::isnan(v) || v < 0.0) throw Error(ErrorCode::InvalidArgument, "thresholds must be nonnegative");
  }
}

bool FilterThresholds::at_least_as_tight_as(const FilterThresholds& looser) const {
  return t1_min >= looser.t1_min && t2_min >= looser.t2_min && e1q_max <= looser.e1q_max &&
         e2q_max <= looser.e2q_max && ero_max <= looser.ero_max;
}

std::vector<FilterThresholds> default_cascade_stages() {
  FilterThresholds base;
  base.t1_min = 30.0;
  base.t2_min = 15.0;
  base.e1q_max = 0.01;
  base.e2q_max = 0.10;
  std::vector<FilterThresholds> stages{base};
  base.ero_max = 0.05;
  stages.push_back(base);
  for (double e2q : {0.01, 0.005, 0.003}) {
    base.e2q_max = e2q;
    stages.push_back(base);
  }
  return stages;
}

std::string_view to_string(LayoutKind kind) { return kind == LayoutKind::Path3 ? "path3" : "subgraph6"; }

std::string LayoutCandidate::label() const {
  std::string s;
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    if (i) s.push_back('-');
    s += std::to_string(mapping[i]);
  }
  return s;
}

CouplingGraph filter_graph(const CalibrationSnapshot& snapshot, const FilterThresholds& th) {
  th.validate();
  CouplingGraph g;
  for (const auto& [index, q] : snapshot.qubits) {
    if (node_passes(q, th)) g.add_node(index);
  }
  for (const auto& e : snapshot.edges) {
    if (g.has_node(e.a) && g.has_node(e.b) && e.err_2q < th.e2q_max) g.add_edge(e.a, e.b);
  }
  return g;
}

std::vector<LayoutCandidate> enumerate_paths3(const CouplingGraph& g) {
  std::vector<LayoutCandidate> out;
  for (int b : g.nodes()) {
    const auto& nb = g.neighbors(b);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        out.push_back({{nb[i], b, nb[j]}, 0.0, LayoutKind::Path3});
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const LayoutCandidate& x, const LayoutCandidate& y) { return x.mapping < y.mapping; });
  return out;
}

double score_layout(const LayoutCandidate& cand, const Circuit& circuit,
                    const CalibrationSnapshot& snapshot) {
  if (cand.mapping.size() != static_cast<std::size_t>(circuit.n_qubits)) {
    throw Error(ErrorCode::InvalidTargets, "layout size does not match circuit");
  }
  const Circuit native = circuit.is_native() ? circuit : rewrite_native(circuit);
  std::map<int, int> local_of;
  for (int i = 0; i < native.n_qubits; ++i) {
    local_of[native.is_native() ? native.physical[static_cast<std::size_t>(i)] : i] = i;
  }
  auto place = [&](int q) { return cand.mapping[static_cast<std::size_t>(local_of.at(q))]; };

  double score = 0.0;
  for (const auto& op : native.ops) {
    switch (op.kind) {
    case OpKind::SX:
    case OpKind::X: score += nll(snapshot.qubit(place(op.qubits[0])).err_1q); break;
    case OpKind::CZ: score += nll(snapshot.edge(place(op.qubits[0]), place(op.qubits[1])).err_2q); break;
    case OpKind::Measure: score += nll(snapshot.qubit(place(op.qubits[0])).mean_readout_error()); break;
    case OpKind::H:
    case OpKind::CX: throw Error(ErrorCode::InvalidArgument, "score_layout needs native ops");
    default: break;
    }
  }
  return score;
}

std::vector<std::vector<int>> enumerate_embeddings(const CouplingGraph& g, const CouplingGraph& pattern) {
  if (pattern.nodes().empty()) return {};
  Matcher m{g, pattern, match_order(pattern), {}, {}, {}};
  m.extend(0);
  return std::move(m.found);
}

std::size_t seeded_argmin(const std::vector<double>& scores, std::uint64_t seed) {
  if (scores.empty()) throw Error(ErrorCode::InvalidArgument, "no candidates to choose from");
  std::vector<std::size_t> perm(scores.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  // mt19937_64 output is fixed by the standard; the shuffle is spelled out
  // so the permutation does not depend on the library's distributions.
  std::mt19937_64 rng(seed);
  for (std::size_t i = perm.size(); i-- > 1;) {
    std::swap(perm[i], perm[static_cast<std::size_t>(rng() % (i + 1))]);
  }
  std::size_t best = perm.front();
  for (std::size_t k : perm) {
    if (scores[k] < scores[best] - kTieTol) best = k;
  }
  return best;
}

LayoutCandidate subgraph_match(const CouplingGraph& g, const CouplingGraph& pattern,
                               const EmbeddingScorer& scorer, std::uint64_t seed) {
  const auto embeddings = enumerate_embeddings(g, pattern);
  if (embeddings.empty()) throw Error(ErrorCode::NoEmbedding, "pattern does not embed into the coupling graph");
  std::vector<double> scores;
  scores.reserve(embeddings.size());
  for (const auto& m : embeddings) scores.push_back(scorer(m));
  const std::size_t k = seeded_argmin(scores, seed);
  return {embeddings[k], scores[k], LayoutKind::Subgraph6};
}

LayoutCandidate subgraph_match(const CouplingGraph& g, const Circuit& circuit,
                               const CalibrationSnapshot& snapshot, std::uint64_t seed) {
  const Circuit native = rewrite_native(circuit);
  const CouplingGraph pattern = interaction_graph(circuit);
  return subgraph_match(
      g, pattern,
      [&](const std::vector<int>& mapping) {
        return score_layout({mapping, 0.0, LayoutKind::Subgraph6}, native, snapshot);
      },
      seed);
}

EmbeddingScorer edge_error_scorer(const CouplingGraph& pattern, const CalibrationSnapshot& snapshot) {
  const std::vector<int> order(pattern.nodes().begin(), pattern.nodes().end());
  std::map<int, std::size_t> slot;
  for (std::size_t i = 0; i < order.size(); ++i) slot[order[i]] = i;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [a, b] : pattern.edges()) edges.emplace_back(slot.at(a), slot.at(b));
  return [edges, &snapshot](const std::vector<int>& mapping) {
    double s = 0.0;
    for (int p : mapping) s += nll(snapshot.qubit(p).err_1q);
    for (const auto& [i, j] : edges) s += nll(snapshot.edge(mapping[i], mapping[j]).err_2q);
    return s;
  };
}

} // namespace lfd
