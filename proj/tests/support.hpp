#pragma once

#include <filesystem>
#include <initializer_list>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pcsmaa/pcm.hpp"
#include "pcsmaa/problem_io.hpp"
#include "pcsmaa/spantree.hpp"

namespace testing_support {

using namespace pcsmaa;

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(PCSMAA_DATA_DIR) / name;
}

inline Problem school() { return load_problem(data_path("school.json")); }

// Dense matrix from strings like "1/3"; "" marks a missing entry.
inline JudgementTable table(std::initializer_list<std::initializer_list<const char*>> rows) {
  RawMatrix raw;
  for (const auto& row : rows) {
    auto& r = raw.emplace_back();
    for (const char* cell : row) {
      if (std::string(cell).empty()) {
        r.emplace_back();
      } else {
        r.emplace_back(Rational::parse(cell));
      }
    }
  }
  return build_table(raw);
}

inline PairwiseMatrix matrix(std::initializer_list<std::initializer_list<const char*>> rows) {
  return PairwiseMatrix(table(rows));
}

// Complete matrix with entry(i, j) = v[i] / v[j].
inline PairwiseMatrix consistent(const std::vector<std::int64_t>& v) {
  JudgementTable t(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    for (Index j = i + 1; j < v.size(); ++j) t.set(i, j, Rational(v[i], v[j]));
  }
  return PairwiseMatrix(std::move(t));
}

inline ComparisonGraph complete_graph(Index n) {
  std::vector<Edge> edges;
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) edges.push_back({a, b, Rational(1)});
  }
  return ComparisonGraph(n, std::move(edges));
}

// Random connected graph: a random spanning path plus each remaining pair
// with probability p, with random small-integer ratios.
inline ComparisonGraph random_connected_graph(std::mt19937_64& rng, Index n, double p) {
  std::vector<Index> order(n);
  for (Index i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  std::uniform_int_distribution<int> value(1, 9);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution extra(p);
  std::vector<Edge> edges;
  auto add = [&](Index a, Index b) {
    if (a > b) std::swap(a, b);
    used[a][b] = true;
    const Rational r(value(rng));
    edges.push_back({a, b, coin(rng) ? r : r.reciprocal()});
  };
  for (Index i = 0; i + 1 < n; ++i) add(order[i], order[i + 1]);
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      if (!used[a][b] && extra(rng)) add(a, b);
    }
  }
  return ComparisonGraph(n, std::move(edges));
}

inline JudgementTable to_table(const ComparisonGraph& graph) {
  JudgementTable t(graph.node_count());
  for (const auto& e : graph.edges()) t.set(e.a, e.b, e.ratio);
  return t;
}

// Oracle: test every (n-1)-edge subset for acyclicity with a naive
// union-find. Returns the trees in lexicographic order of edge indices.
inline std::vector<std::vector<std::size_t>> brute_force_trees(const ComparisonGraph& g) {
  const std::size_t n = g.node_count();
  const std::size_t m = g.edges().size();
  std::vector<std::vector<std::size_t>> out;
  if (n == 1) return {{}};
  if (m < n - 1) return out;
  std::vector<std::size_t> pick(n - 1);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    bool acyclic = true;
    for (auto e : pick) {
      const auto ra = root(g.edges()[e].a), rb = root(g.edges()[e].b);
      if (ra == rb) {
        acyclic = false;
        break;
      }
      parent[ra] = rb;
    }
    if (acyclic) out.push_back(pick);
    // next combination
    std::size_t i = n - 1;
    while (i > 0 && pick[i - 1] == m - (n - 1) + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < n - 1; ++k) pick[k] = pick[k - 1] + 1;
  }
  return out;
}

}  // namespace testing_support
