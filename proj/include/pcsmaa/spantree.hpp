#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pcsmaa/pcm.hpp"
#include "pcsmaa/rational.hpp"

namespace pcsmaa {

// Undirected edge {a, b} with a < b; `ratio` is weight_a / weight_b.
struct Edge {
  Index a = 0;
  Index b = 0;
  Rational ratio;
};

struct Incidence {
  Index node = 0;
  std::size_t edge = 0;
};

// Graph view of a pairwise matrix: one node per item, one edge per judged
// pair. Edges are sorted lexicographically by (a, b), so edge indices order
// the same way as the pairs themselves.
class ComparisonGraph {
 public:
  ComparisonGraph() = default;
  ComparisonGraph(Index node_count, std::vector<Edge> edges);

  Index node_count() const noexcept { return node_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Incidence>& neighbors(Index node) const { return adjacency_.at(node); }
  std::optional<std::size_t> find_edge(Index a, Index b) const;
  bool is_connected() const;

 private:
  Index node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
};

// node_count - 1 edge indices into a ComparisonGraph, sorted ascending.
struct SpanningTree {
  std::vector<std::size_t> edges;

  friend bool operator==(const SpanningTree&, const SpanningTree&) = default;
  friend auto operator<=>(const SpanningTree&, const SpanningTree&) = default;
};

ComparisonGraph to_graph(const PairwiseMatrix& matrix);
// Same view for a table that may still be disconnected.
ComparisonGraph to_graph(const JudgementTable& table);

// Matrix-tree theorem: determinant of the Laplacian with the last row and
// column removed, by fraction-free (Bareiss) elimination over big integers.
// Depends on topology only. A single node has exactly one (empty) tree.
BigInt count_trees(const ComparisonGraph& graph);

// Visits every spanning tree exactly once in lexicographic order of the sorted
// edge list. Include/exclude recursion over edges, pruning exclusions that
// would disconnect the graph, so every branch ends in a tree.
void for_each_tree(const ComparisonGraph& graph,
                   const std::function<void(const SpanningTree&)>& visit);

// All spanning trees. Throws Error(CapExceeded) when count_trees > cap.
std::vector<SpanningTree> enumerate_trees(const ComparisonGraph& graph, std::uint64_t cap);

// True when `tree` has node_count - 1 distinct in-range edges forming a
// connected acyclic subgraph.
bool is_spanning_tree(const SpanningTree& tree, const ComparisonGraph& graph);

// The unique priority vector reproducing every judgement on the tree: node 0
// gets weight 1, the rest follow by propagating ratios along tree edges, then
// the vector is normalized to sum 1. Exact.
ExactPriorityVector tree_priority(const SpanningTree& tree, const ComparisonGraph& graph);

}  // namespace pcsmaa
