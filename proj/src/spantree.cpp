#include "pcsmaa/spantree.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

namespace pcsmaa {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

class TreeEnumerator {
 public:
  TreeEnumerator(const ComparisonGraph& graph, const std::function<void(const SpanningTree&)>& visit)
      : graph_(graph), visit_(visit) {}

  void run() {
    const Index n = graph_.node_count();
    if (n == 0) return;
    if (!graph_.is_connected()) return;
    DisjointSets sets(n);
    recurse(0, sets);
  }

 private:
  void recurse(std::size_t next, const DisjointSets& sets) {
    if (chosen_.edges.size() + 1 == graph_.node_count()) {
      visit_(chosen_);
      return;
    }
    if (next == graph_.edges().size()) return;
    const Edge& e = graph_.edges()[next];

    // Include `next` when it joins two components.
    DisjointSets with = sets;
    if (with.unite(e.a, e.b)) {
      chosen_.edges.push_back(next);
      recurse(next + 1, with);
      chosen_.edges.pop_back();
    }
    // Exclude `next` only if the chosen edges plus later edges still span.
    if (still_spans(next + 1, sets)) recurse(next + 1, sets);
  }

  bool still_spans(std::size_t from, DisjointSets sets) const {
    std::size_t components = 0;
    for (Index v = 0; v < graph_.node_count(); ++v) components += sets.find(v) == v;
    for (std::size_t k = from; k < graph_.edges().size() && components > 1; ++k) {
      if (sets.unite(graph_.edges()[k].a, graph_.edges()[k].b)) --components;
    }
    return components == 1;
  }

  const ComparisonGraph& graph_;
  const std::function<void(const SpanningTree&)>& visit_;
  SpanningTree chosen_;
};

}  // namespace

ComparisonGraph::ComparisonGraph(Index node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)), adjacency_(node_count) {
  for (auto& e : edges_) {
    if (e.a == e.b || e.a >= node_count_ || e.b >= node_count_) {
      throw Error(Errc::IndexOutOfRange, fmt::format("invalid edge ({}, {})", e.a, e.b));
    }
    if (e.a > e.b) {
      std::swap(e.a, e.b);
      e.ratio = e.ratio.reciprocal();
    }
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (k > 0 && edges_[k].a == edges_[k - 1].a && edges_[k].b == edges_[k - 1].b) {
      throw Error(Errc::Schema, fmt::format("duplicate edge ({}, {})", edges_[k].a, edges_[k].b));
    }
    adjacency_[edges_[k].a].push_back({edges_[k].b, k});
    adjacency_[edges_[k].b].push_back({edges_[k].a, k});
  }
}

std::optional<std::size_t> ComparisonGraph::find_edge(Index a, Index b) const {
  if (a > b) std::swap(a, b);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{a, b},
                                   [](const Edge& e, const std::pair<Index, Index>& key) {
                                     return std::tie(e.a, e.b) < std::tie(key.first, key.second);
                                   });
  if (it == edges_.end() || it->a != a || it->b != b) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

bool ComparisonGraph::is_connected() const {
  if (node_count_ == 0) return false;
  DisjointSets sets(node_count_);
  std::size_t components = node_count_;
  for (const auto& e : edges_) components -= sets.unite(e.a, e.b);
  return components == 1;
}

ComparisonGraph to_graph(const JudgementTable& table) {
  std::vector<Edge> edges;
  for (const auto& j : table.judgements()) edges.push_back({j.row, j.col, j.value});
  return ComparisonGraph(table.size(), std::move(edges));
}

ComparisonGraph to_graph(const PairwiseMatrix& matrix) { return to_graph(matrix.table()); }

BigInt count_trees(const ComparisonGraph& graph) {
  const Index n = graph.node_count();
  if (n == 0) return 0;
  if (n == 1) return 1;
  const Index k = n - 1;
  std::vector<std::vector<BigInt>> lap(k, std::vector<BigInt>(k, 0));
  for (const auto& e : graph.edges()) {
    if (e.a < k) lap[e.a][e.a] += 1;
    if (e.b < k) lap[e.b][e.b] += 1;
    if (e.a < k && e.b < k) {
      lap[e.a][e.b] -= 1;
      lap[e.b][e.a] -= 1;
    }
  }
  // Bareiss: every division below is exact.
  BigInt previous = 1;
  int sign = 1;
  for (Index p = 0; p < k; ++p) {
    if (lap[p][p] == 0) {
      Index swap_row = p + 1;
      while (swap_row < k && lap[swap_row][p] == 0) ++swap_row;
      if (swap_row == k) return 0;
      std::swap(lap[p], lap[swap_row]);
      sign = -sign;
    }
    for (Index i = p + 1; i < k; ++i) {
      for (Index j = p + 1; j < k; ++j) {
        lap[i][j] = (lap[i][j] * lap[p][p] - lap[i][p] * lap[p][j]) / previous;
      }
      lap[i][p] = 0;
    }
    previous = lap[p][p];
  }
  BigInt det = lap[k - 1][k - 1];
  return sign < 0 ? BigInt(-det) : det;
}

void for_each_tree(const ComparisonGraph& graph,
                   const std::function<void(const SpanningTree&)>& visit) {
  TreeEnumerator(graph, visit).run();
}

std::vector<SpanningTree> enumerate_trees(const ComparisonGraph& graph, std::uint64_t cap) {
  const BigInt count = count_trees(graph);
  if (count > cap) {
    throw Error(Errc::CapExceeded,
                fmt::format("graph has {} spanning trees, above the enumeration cap {}",
                            count.str(), cap));
  }
  std::vector<SpanningTree> trees;
  trees.reserve(count.convert_to<std::size_t>());
  for_each_tree(graph, [&](const SpanningTree& t) { trees.push_back(t); });
  return trees;
}

bool is_spanning_tree(const SpanningTree& tree, const ComparisonGraph& graph) {
  const Index n = graph.node_count();
  if (n == 0 || tree.edges.size() + 1 != n) return false;
  DisjointSets sets(n);
  for (std::size_t k : tree.edges) {
    if (k >= graph.edges().size()) return false;
    if (!sets.unite(graph.edges()[k].a, graph.edges()[k].b)) return false;
  }
  return true;
}

ExactPriorityVector tree_priority(const SpanningTree& tree, const ComparisonGraph& graph) {
  const Index n = graph.node_count();
  std::vector<std::vector<Incidence>> adjacency(n);
  for (std::size_t k : tree.edges) {
    const Edge& e = graph.edges().at(k);
    adjacency[e.a].push_back({e.b, k});
    adjacency[e.b].push_back({e.a, k});
  }
  std::vector<std::optional<Rational>> weight(n);
  weight[0] = Rational(1);
  std::vector<Index> stack{0};
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    for (const auto& [u, k] : adjacency[v]) {
      if (weight[u]) continue;
      const Edge& e = graph.edges()[k];
      // ratio = w_a / w_b
      weight[u] = (v == e.a) ? *weight[v] / e.ratio : *weight[v] * e.ratio;
      stack.push_back(u);
    }
  }
  Rational sum(0);
  for (const auto& w : weight) {
    if (!w) throw Error(Errc::Schema, "tree does not span the graph");
    sum = sum + *w;
  }
  ExactPriorityVector out;
  out.weights.reserve(n);
  for (const auto& w : weight) out.weights.push_back(*w / sum);
  return out;
}

}  // namespace pcsmaa
