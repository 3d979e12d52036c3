#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "pcsmaa/pcm.hpp"
#include "pcsmaa/spantree.hpp"

namespace pcsmaa {

// How many combinations to draw, and from which seed.
struct SamplePlan {
  double accuracy = 0.01;     // lambda, in (0, 1)
  double confidence = 99.0;   // percent, in (0, 100)
  std::optional<double> z_override;
  std::uint64_t iterations = 0;
  bool iterations_overridden = false;
  std::uint64_t seed = 0;

  // Z actually used for the plan.
  double z() const;

  friend bool operator==(const SamplePlan&, const SamplePlan&) = default;
};

// Two-sided standard-normal quantile for `confidence` percent. 99 maps to
// 2.58 so the classic 16,641-iteration setting reproduces exactly.
double z_score(double confidence);

// ceil(Z^2 / (4 accuracy^2)). Throws BadAccuracy / BadConfidence.
std::uint64_t required_iterations(double accuracy, double confidence,
                                  std::optional<double> z_override = std::nullopt);

// Plan with iterations derived from (accuracy, confidence, z) unless
// `iterations` is given.
SamplePlan make_plan(double accuracy, double confidence, std::optional<double> z_override,
                     std::uint64_t seed, std::optional<std::uint64_t> iterations = std::nullopt);

// SplitMix64 finalizer over (seed, index); keys independent substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

// Random source for one draw index. Every iteration of a sampling run owns
// the stream keyed by (seed, iteration), so output does not depend on how
// iterations are split across workers.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index) : engine_(mix_seed(seed, index)) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, bound), bound > 0. Lemire's multiply-and-reject, so the
  // sequence is identical on every standard library.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t kMaxWalkSteps = 1'000'000'000;

// Aldous-Broder: walk from a uniform start node to uniform neighbours,
// keeping the edge used to enter each node for the first time. The result is
// uniform over all spanning trees. Throws WalkStall after `max_steps` steps.
SpanningTree random_tree(const ComparisonGraph& graph, RandomStream& rng,
                         std::uint64_t max_steps = kMaxWalkSteps);

struct ProblemGraphs {
  std::vector<ComparisonGraph> criteria;
  ComparisonGraph weights;

  static ProblemGraphs from(const Problem& problem);
};

struct TreeCombination {
  std::vector<SpanningTree> criterion_trees;
  SpanningTree weight_tree;

  friend bool operator==(const TreeCombination&, const TreeCombination&) = default;
};

// Combination for draw `index`: the weight tree first, then one tree per
// criterion, all from the stream keyed by (seed, index).
TreeCombination draw_combination(const ProblemGraphs& graphs, std::uint64_t seed,
                                 std::uint64_t index);

// Visits draws [first, last) in order.
void for_each_combination(const ProblemGraphs& graphs, std::uint64_t seed, std::uint64_t first,
                          std::uint64_t last,
                          const std::function<void(std::uint64_t, const TreeCombination&)>& visit);

// Exactly plan.iterations combinations.
std::vector<TreeCombination> sample_combinations(const Problem& problem, const SamplePlan& plan);

}  // namespace pcsmaa
