#include "pcsmaa/sampler.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

namespace pcsmaa {

double SamplePlan::z() const { return z_override ? *z_override : z_score(confidence); }

double z_score(double confidence) {
  if (!(confidence > 0.0 && confidence < 100.0)) {
    throw Error(Errc::BadConfidence, fmt::format("confidence {} is outside (0, 100)", confidence));
  }
  if (confidence == 99.0) return 2.58;
  const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, (1.0 + confidence / 100.0) / 2.0);
}

std::uint64_t required_iterations(double accuracy, double confidence,
                                  std::optional<double> z_override) {
  if (!(accuracy > 0.0 && accuracy < 1.0)) {
    throw Error(Errc::BadAccuracy, fmt::format("accuracy {} is outside (0, 1)", accuracy));
  }
  double z = 0.0;
  if (z_override) {
    if (!(*z_override > 0.0) || !std::isfinite(*z_override)) {
      throw Error(Errc::BadConfidence, fmt::format("z override {} is not positive", *z_override));
    }
    z = *z_override;
  } else {
    z = z_score(confidence);
  }
  const double exact = z * z / (4.0 * accuracy * accuracy);
  // Whole-number results can land an ulp high (2.58 at accuracy 0.03 gives
  // 1849.0000000000002); absorb that so ceil does not round up.
  return static_cast<std::uint64_t>(std::ceil(exact * (1.0 - 1e-12)));
}

SamplePlan make_plan(double accuracy, double confidence, std::optional<double> z_override,
                     std::uint64_t seed, std::optional<std::uint64_t> iterations) {
  SamplePlan plan;
  plan.accuracy = accuracy;
  plan.confidence = confidence;
  plan.z_override = z_override;
  plan.seed = seed;
  if (iterations && *iterations == 0) throw Error(Errc::BadPlan, "iterations must be positive");
  const std::uint64_t derived = required_iterations(accuracy, confidence, z_override);
  plan.iterations = iterations.value_or(derived);
  plan.iterations_overridden = iterations.has_value();
  return plan;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return splitmix(splitmix(seed) ^ splitmix(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  unsigned __int128 product = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

SpanningTree random_tree(const ComparisonGraph& graph, RandomStream& rng, std::uint64_t max_steps) {
  const Index n = graph.node_count();
  SpanningTree tree;
  if (n <= 1) return tree;
  tree.edges.reserve(n - 1);
  std::vector<bool> visited(n, false);
  Index current = static_cast<Index>(rng.below(n));
  visited[current] = true;
  Index remaining = n - 1;
  std::uint64_t steps = 0;
  while (remaining > 0) {
    if (steps++ >= max_steps) {
      throw Error(Errc::WalkStall, fmt::format("random walk exceeded {} steps", max_steps));
    }
    const auto& around = graph.neighbors(current);
    if (around.empty()) throw Error(Errc::DisconnectedGraph, "random walk reached an isolated node");
    const Incidence& step = around[rng.below(around.size())];
    if (!visited[step.node]) {
      visited[step.node] = true;
      tree.edges.push_back(step.edge);
      --remaining;
    }
    current = step.node;
  }
  std::sort(tree.edges.begin(), tree.edges.end());
  return tree;
}

ProblemGraphs ProblemGraphs::from(const Problem& problem) {
  ProblemGraphs graphs;
  graphs.criteria.reserve(problem.criterion_matrices.size());
  for (const auto& m : problem.criterion_matrices) graphs.criteria.push_back(to_graph(m));
  graphs.weights = to_graph(problem.weight_matrix);
  return graphs;
}

TreeCombination draw_combination(const ProblemGraphs& graphs, std::uint64_t seed,
                                 std::uint64_t index) {
  RandomStream rng(seed, index);
  TreeCombination combination;
  combination.weight_tree = random_tree(graphs.weights, rng);
  combination.criterion_trees.reserve(graphs.criteria.size());
  for (const auto& g : graphs.criteria) combination.criterion_trees.push_back(random_tree(g, rng));
  return combination;
}

void for_each_combination(const ProblemGraphs& graphs, std::uint64_t seed, std::uint64_t first,
                          std::uint64_t last,
                          const std::function<void(std::uint64_t, const TreeCombination&)>& visit) {
  for (std::uint64_t i = first; i < last; ++i) visit(i, draw_combination(graphs, seed, i));
}

std::vector<TreeCombination> sample_combinations(const Problem& problem, const SamplePlan& plan) {
  const auto graphs = ProblemGraphs::from(problem);
  std::vector<TreeCombination> out;
  out.reserve(plan.iterations);
  for_each_combination(graphs, plan.seed, 0, plan.iterations,
                       [&](std::uint64_t, const TreeCombination& c) { out.push_back(c); });
  return out;
}

}  // namespace pcsmaa
