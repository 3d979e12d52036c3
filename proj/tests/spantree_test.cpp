#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "pcsmaa/spantree.hpp"
#include "support.hpp"

using namespace pcsmaa;
using namespace testing_support;

namespace {

ComparisonGraph path_graph(Index n) {
  std::vector<Edge> edges;
  for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, Rational(2)});
  return ComparisonGraph(n, std::move(edges));
}

ComparisonGraph without_edge(const ComparisonGraph& g, Index a, Index b) {
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (!(e.a == a && e.b == b)) edges.push_back(e);
  }
  return ComparisonGraph(g.node_count(), std::move(edges));
}

}  // namespace

TEST(Graph, NormalizesOrientation) {
  const ComparisonGraph g(3, {{2, 0, Rational(4)}, {0, 1, Rational(3)}});
  ASSERT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.edges()[0].a, 0u);
  EXPECT_EQ(g.edges()[0].b, 1u);
  EXPECT_EQ(g.edges()[1].a, 0u);
  EXPECT_EQ(g.edges()[1].b, 2u);
  EXPECT_EQ(g.edges()[1].ratio, Rational(1, 4));
  EXPECT_TRUE(g.find_edge(2, 0).has_value());
  EXPECT_FALSE(g.find_edge(1, 2).has_value());
}

TEST(Graph, DuplicateEdgeRejected) {
  EXPECT_THROW(ComparisonGraph(2, {{0, 1, Rational(2)}, {1, 0, Rational(1, 2)}}), Error);
}

TEST(Graph, FromSchoolMatrix) {
  const auto g = to_graph(school().criterion_matrices[0]);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edges().size(), 3u);
}

TEST(Graph, MissingPairDropsEdge) {
  auto t = consistent({1, 2, 3, 4}).table();
  t.clear(0, 2);
  EXPECT_EQ(to_graph(t).edges().size(), 5u);
}

TEST(Graph, AllOnesHasUnitRatios) {
  const auto g = to_graph(matrix({{"1", "1", "1"}, {"1", "1", "1"}, {"1", "1", "1"}}));
  ASSERT_EQ(g.edges().size(), 3u);
  for (const auto& e : g.edges()) EXPECT_EQ(e.ratio, Rational(1));
}

TEST(CountTrees, CompleteGraphs) {
  EXPECT_EQ(count_trees(complete_graph(1)), 1);
  EXPECT_EQ(count_trees(complete_graph(2)), 1);
  EXPECT_EQ(count_trees(complete_graph(3)), 3);
  EXPECT_EQ(count_trees(complete_graph(4)), 16);
  EXPECT_EQ(count_trees(complete_graph(6)), 1296);
  EXPECT_EQ(count_trees(complete_graph(12)), BigInt("61917364224"));
}

TEST(CountTrees, K4MinusEdge) {
  const auto g = without_edge(complete_graph(4), 0, 2);
  EXPECT_EQ(count_trees(g), 8);
  EXPECT_EQ(brute_force_trees(g).size(), 8u);
}

TEST(CountTrees, PathAndDisconnected) {
  EXPECT_EQ(count_trees(path_graph(5)), 1);
  EXPECT_EQ(count_trees(ComparisonGraph(3, {{0, 1, Rational(1)}})), 0);
}

TEST(CountTrees, IgnoresJudgementValues) {
  std::mt19937_64 rng(7);
  const auto g = random_connected_graph(rng, 6, 0.6);
  std::vector<Edge> ones = g.edges();
  for (auto& e : ones) e.ratio = Rational(1);
  EXPECT_EQ(count_trees(g), count_trees(ComparisonGraph(6, ones)));
}

TEST(Enumerate, SmallCompleteGraphs) {
  for (Index n : {3u, 4u, 5u}) {
    const auto trees = enumerate_trees(complete_graph(n), 1'000'000);
    const auto expected = static_cast<std::size_t>(std::pow(n, n - 2));
    EXPECT_EQ(trees.size(), expected);
    EXPECT_EQ(std::set<SpanningTree>(trees.begin(), trees.end()).size(), expected);
    EXPECT_TRUE(std::is_sorted(trees.begin(), trees.end()));
  }
}

TEST(Enumerate, PathHasOneTree) {
  const auto g = path_graph(4);
  const auto trees = enumerate_trees(g, 10);
  ASSERT_EQ(trees.size(), 1u);
  EXPECT_EQ(trees[0].edges, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Enumerate, CapExceeded) {
  try {
    enumerate_trees(complete_graph(5), 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CapExceeded);
  }
}

TEST(Enumerate, MatchesBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<Index> size(1, 7);
  std::uniform_real_distribution<double> density(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_connected_graph(rng, size(rng), density(rng));
    const auto oracle = brute_force_trees(g);
    EXPECT_EQ(count_trees(g), oracle.size());
    std::vector<std::vector<std::size_t>> got;
    for_each_tree(g, [&](const SpanningTree& t) {
      EXPECT_TRUE(is_spanning_tree(t, g));
      got.push_back(t.edges);
    });
    EXPECT_EQ(got, oracle) << "trial " << trial;
  }
}

TEST(IsSpanningTree, RejectsCyclesAndBadIndices) {
  const auto g = complete_graph(4);
  EXPECT_TRUE(is_spanning_tree({{0, 1, 2}}, g));
  EXPECT_FALSE(is_spanning_tree({{0, 1, 3}}, g));  // (0,1),(0,2),(1,2) is a cycle
  EXPECT_FALSE(is_spanning_tree({{0, 1}}, g));
  EXPECT_FALSE(is_spanning_tree({{0, 1, 9}}, g));
  EXPECT_FALSE(is_spanning_tree({{0, 0, 1}}, g));
}

TEST(TreePriority, SchoolLearningPath) {
  const auto g = to_graph(school().criterion_matrices[0]);
  // edges: (0,1), (0,2), (1,2)
  const auto w = tree_priority({{0, 2}}, g);
  EXPECT_EQ(w.weights, (std::vector<Rational>{Rational(1, 5), Rational(3, 5), Rational(1, 5)}));
}

TEST(TreePriority, SchoolLifeStar) {
  const auto g = to_graph(school().criterion_matrices[2]);
  const auto w = tree_priority({{0, 1}}, g);
  EXPECT_EQ(w.weights, (std::vector<Rational>{Rational(5, 11), Rational(1, 11), Rational(5, 11)}));
}

TEST(TreePriority, ConsistentMatrixEveryTreeAgrees) {
  const auto m = consistent({3, 1, 4, 1, 5});
  const auto g = to_graph(m);
  const auto gm = priority_geomean(m);
  for_each_tree(g, [&](const SpanningTree& t) {
    const auto w = tree_priority(t, g).to_double();
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], gm[i], 1e-12);
  });
}

TEST(TreePriority, ReproducesTreeEdgesExactly) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_connected_graph(rng, 2 + trial % 6, 0.5);
    for_each_tree(g, [&](const SpanningTree& t) {
      const auto w = tree_priority(t, g);
      Rational sum(0);
      for (const auto& x : w.weights) {
        EXPECT_TRUE(x.is_positive());
        sum = sum + x;
      }
      EXPECT_EQ(sum, Rational(1));
      for (auto e : t.edges) {
        const auto& edge = g.edges()[e];
        EXPECT_EQ(w[edge.a] / w[edge.b], edge.ratio);
      }
    });
  }
}

// Normalized componentwise geometric mean of all tree vectors equals the
// row geometric mean of the complete matrix.
TEST(TreePriority, GeometricMeanOfTreesIsRowGeometricMean) {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 3 + trial % 4;
    const auto m = PairwiseMatrix(to_table(random_connected_graph(rng, n, 1.0)));
    const auto g = to_graph(m);
    std::vector<double> log_sum(n, 0.0);
    std::size_t count = 0;
    for_each_tree(g, [&](const SpanningTree& t) {
      const auto w = tree_priority(t, g).to_double();
      for (Index i = 0; i < n; ++i) log_sum[i] += std::log(w[i]);
      ++count;
    });
    std::vector<double> mean(n);
    double total = 0;
    for (Index i = 0; i < n; ++i) total += mean[i] = std::exp(log_sum[i] / count);
    const auto rgm = priority_geomean(m);
    for (Index i = 0; i < n; ++i) EXPECT_NEAR(mean[i] / total, rgm[i], 1e-9);
  }
}
