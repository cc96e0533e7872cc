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

#include "gtest/gtest.h"
#include "layerfid/error.hpp"

namespace lfd {
namespace {

TEST(Graph, EdgesAreUndirected) {
  CouplingGraph g;
  g.add_edge(3, 1);
  EXPECT_TRUE(g.has_edge(1, 3));
  EXPECT_TRUE(g.has_edge(3, 1));
  EXPECT_EQ(g.edges().begin()->first, 1);
  EXPECT_EQ(g.degree(1), 1);
  EXPECT_TRUE(g.neighbors(7).empty());
}

TEST(Graph, RejectsSelfLoop) { EXPECT_THROW(CouplingGraph().add_edge(2, 2), Error); }

TEST(Graph, Subgraph) {
  CouplingGraph big({0, 1, 2}, {{0, 1}, {1, 2}});
  CouplingGraph small({0, 1}, {{0, 1}});
  EXPECT_TRUE(small.is_subgraph_of(big));
  EXPECT_FALSE(big.is_subgraph_of(small));
  EXPECT_TRUE(CouplingGraph().is_subgraph_of(small));
}

} // namespace
} // namespace lfd
