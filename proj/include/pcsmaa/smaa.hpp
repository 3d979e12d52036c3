#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcsmaa/pcm.hpp"
#include "pcsmaa/rational.hpp"
#include "pcsmaa/sampler.hpp"
#include "pcsmaa/spantree.hpp"

namespace pcsmaa {

// Overall score per alternative; sums to 1.
using ScoreVector = std::vector<BigRational>;

// sum_j weights[j] * evaluations[j], exact.
ScoreVector overall_priority(std::span<const ExactPriorityVector> evaluations,
                             const ExactPriorityVector& weights);
ScoreVector overall_priority(const TreeCombination& combination, const ProblemGraphs& graphs);
ScoreVector overall_priority(const TreeCombination& combination, const Problem& problem);

// Floating-point aggregate for single-vector baselines (eigenvector, RGM).
PriorityVector overall_priority(std::span<const PriorityVector> evaluations,
                                const PriorityVector& weights);

// 1 + number of alternatives with a strictly greater score. Ties share a
// rank and the next rank is skipped.
template <class Score>
std::size_t rank_of(const std::vector<Score>& scores, std::size_t alternative) {
  std::size_t rank = 1;
  for (std::size_t other = 0; other < scores.size(); ++other) {
    if (other != alternative && scores[other] > scores[alternative]) ++rank;
  }
  return rank;
}

template <class Score>
std::vector<std::size_t> ranks(const std::vector<Score>& scores) {
  std::vector<std::size_t> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = rank_of(scores, i);
  return out;
}

// Priority vector as integers over a common denominator: value_i = num[i] / den.
struct ScaledVector {
  std::vector<std::int64_t> num;
  std::int64_t den = 1;

  static ScaledVector from(const ExactPriorityVector& vector);
};

namespace detail {

// keys[a] = positive constant * overall score of a, so comparisons between
// keys are comparisons between exact scores. Returns false on 128-bit
// overflow, leaving `keys` unspecified.
bool score_keys(std::span<const ScaledVector* const> evaluations, const ScaledVector& weights,
                std::vector<__int128>& keys);
// Same keys in arbitrary precision.
void score_keys(std::span<const ScaledVector* const> evaluations, const ScaledVector& weights,
                std::vector<BigInt>& keys);

}  // namespace detail

// Mergeable preference / indifference / rank counters.
class AcceptabilityCounts {
 public:
  AcceptabilityCounts() = default;
  explicit AcceptabilityCounts(std::size_t alternatives);

  template <class Score>
  void add(const std::vector<Score>& scores) {
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t rank = 1;
      for (std::size_t j = 0; j < n_; ++j) {
        if (i == j) continue;
        if (scores[i] > scores[j]) {
          ++preference_[i * n_ + j];
        } else if (scores[i] == scores[j]) {
          ++indifference_[i * n_ + j];
        } else {
          ++rank;
        }
      }
      ++rank_[i * n_ + (rank - 1)];
    }
    ++combinations_;
  }

  void merge(const AcceptabilityCounts& other);

  std::size_t alternatives() const noexcept { return n_; }
  std::uint64_t combinations() const noexcept { return combinations_; }
  // Combinations in which alternative i scores strictly above j.
  std::uint64_t preference(std::size_t i, std::size_t j) const { return preference_.at(i * n_ + j); }
  std::uint64_t indifference(std::size_t i, std::size_t j) const { return indifference_.at(i * n_ + j); }
  // Combinations in which alternative i attains rank position + 1.
  std::uint64_t rank(std::size_t i, std::size_t position) const { return rank_.at(i * n_ + position); }

  void set_raw(std::uint64_t combinations, std::vector<std::uint64_t> preference,
               std::vector<std::uint64_t> indifference, std::vector<std::uint64_t> rank);

  friend bool operator==(const AcceptabilityCounts&, const AcceptabilityCounts&) = default;

 private:
  std::size_t n_ = 0;
  std::uint64_t combinations_ = 0;
  std::vector<std::uint64_t> preference_;
  std::vector<std::uint64_t> indifference_;
  std::vector<std::uint64_t> rank_;
};

enum class Mode { Enumerated, Sampled };

std::string_view to_string(Mode mode);

struct AcceptabilityResult {
  Mode mode = Mode::Enumerated;
  std::vector<std::string> alternatives;
  std::string problem_fingerprint;
  // Size of the full combination space (product of spanning-tree counts).
  BigInt total_space;
  std::optional<SamplePlan> plan;
  AcceptabilityCounts counts;

  double preference_probability(std::size_t i, std::size_t j) const;
  double indifference_probability(std::size_t i, std::size_t j) const;
  double rank_probability(std::size_t i, std::size_t position) const;

  friend bool operator==(const AcceptabilityResult&, const AcceptabilityResult&) = default;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

struct RunOptions {
  unsigned workers = 1;
  std::uint64_t cap = kDefaultEnumerationCap;
  // Called with the completed fraction, at least once per percent and once
  // with 1.0 at the end. Calls are serialized.
  std::function<void(double)> progress;
};

// Product of the spanning-tree counts of every matrix; m^(m-2) n^(m(n-2))
// for complete problems.
BigInt total_space(const Problem& problem);

// Exhaustive pass over every combination, odometer order (weight tree most
// significant, then criteria in order). Throws SpaceTooLarge above
// options.cap.
AcceptabilityResult acceptability_enumerate(const Problem& problem, const RunOptions& options = {});

// plan.iterations independent uniform combinations.
AcceptabilityResult acceptability_sample(const Problem& problem, const SamplePlan& plan,
                                         const RunOptions& options = {});

struct CellSummary {
  double mean = 0.0;
  std::optional<double> stddev;  // sample deviation; absent for a single run
};

struct Summary {
  std::vector<std::string> alternatives;
  std::size_t runs = 0;
  Mode mode = Mode::Enumerated;
  std::vector<std::vector<CellSummary>> preference;    // [i][j]
  std::vector<std::vector<CellSummary>> indifference;  // [i][j]
  std::vector<std::vector<CellSummary>> rank;          // [i][position]
};

// Per-cell mean and standard deviation of probabilities across repeated runs
// of one problem. Throws MixedProblems when the runs disagree on problem.
Summary summarize(std::span<const AcceptabilityResult> results);

}  // namespace pcsmaa
