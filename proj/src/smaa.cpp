#include "pcsmaa/smaa.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "pcsmaa/problem_io.hpp"

namespace pcsmaa {

// --- scores -----------------------------------------------------------------

ScoreVector overall_priority(std::span<const ExactPriorityVector> evaluations,
                             const ExactPriorityVector& weights) {
  if (evaluations.size() != weights.size() || evaluations.empty()) {
    throw Error(Errc::Schema, "one evaluation vector per weight is required");
  }
  ScoreVector scores(evaluations.front().size(), BigRational(0));
  for (std::size_t j = 0; j < evaluations.size(); ++j) {
    const BigRational w = weights[j].to_big();
    for (std::size_t a = 0; a < scores.size(); ++a) scores[a] += w * evaluations[j][a].to_big();
  }
  return scores;
}

ScoreVector overall_priority(const TreeCombination& combination, const ProblemGraphs& graphs) {
  std::vector<ExactPriorityVector> evaluations;
  evaluations.reserve(graphs.criteria.size());
  for (std::size_t j = 0; j < graphs.criteria.size(); ++j) {
    evaluations.push_back(tree_priority(combination.criterion_trees.at(j), graphs.criteria[j]));
  }
  return overall_priority(evaluations, tree_priority(combination.weight_tree, graphs.weights));
}

ScoreVector overall_priority(const TreeCombination& combination, const Problem& problem) {
  return overall_priority(combination, ProblemGraphs::from(problem));
}

PriorityVector overall_priority(std::span<const PriorityVector> evaluations,
                                const PriorityVector& weights) {
  if (evaluations.size() != weights.size() || evaluations.empty()) {
    throw Error(Errc::Schema, "one evaluation vector per weight is required");
  }
  PriorityVector scores{std::vector<double>(evaluations.front().size(), 0.0)};
  for (std::size_t j = 0; j < evaluations.size(); ++j) {
    for (std::size_t a = 0; a < scores.size(); ++a) {
      scores.weights[a] += weights[j] * evaluations[j][a];
    }
  }
  return scores;
}

namespace {

__int128 gcd_wide(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

ScaledVector ScaledVector::from(const ExactPriorityVector& vector) {
  __int128 den = 1;
  for (const auto& w : vector.weights) {
    const __int128 d = w.denominator();
    den = den / gcd_wide(den, d) * d;
    if (den > INT64_MAX) throw Error(Errc::Overflow, "priority vector denominators overflow");
  }
  ScaledVector out;
  out.den = static_cast<std::int64_t>(den);
  out.num.reserve(vector.size());
  for (const auto& w : vector.weights) {
    const __int128 n = static_cast<__int128>(w.numerator()) * (den / w.denominator());
    if (n > INT64_MAX) throw Error(Errc::Overflow, "priority vector numerators overflow");
    out.num.push_back(static_cast<std::int64_t>(n));
  }
  return out;
}

namespace detail {

bool score_keys(std::span<const ScaledVector* const> evaluations, const ScaledVector& weights,
                std::vector<__int128>& keys) {
  // lcm of the evaluation denominators
  __int128 common = 1;
  for (const auto* e : evaluations) {
    const __int128 g = gcd_wide(common, e->den);
    if (__builtin_mul_overflow(common / g, static_cast<__int128>(e->den), &common)) return false;
  }
  const std::size_t n = evaluations.front()->num.size();
  keys.assign(n, 0);
  for (std::size_t j = 0; j < evaluations.size(); ++j) {
    __int128 coefficient = 0;
    if (__builtin_mul_overflow(static_cast<__int128>(weights.num[j]), common / evaluations[j]->den,
                               &coefficient)) {
      return false;
    }
    for (std::size_t a = 0; a < n; ++a) {
      __int128 term = 0;
      if (__builtin_mul_overflow(coefficient, static_cast<__int128>(evaluations[j]->num[a]), &term) ||
          __builtin_add_overflow(keys[a], term, &keys[a])) {
        return false;
      }
    }
  }
  return true;
}

void score_keys(std::span<const ScaledVector* const> evaluations, const ScaledVector& weights,
                std::vector<BigInt>& keys) {
  BigInt common = 1;
  for (const auto* e : evaluations) common = boost::multiprecision::lcm(common, BigInt(e->den));
  const std::size_t n = evaluations.front()->num.size();
  keys.assign(n, 0);
  for (std::size_t j = 0; j < evaluations.size(); ++j) {
    const BigInt coefficient = BigInt(weights.num[j]) * (common / evaluations[j]->den);
    for (std::size_t a = 0; a < n; ++a) keys[a] += coefficient * evaluations[j]->num[a];
  }
}

}  // namespace detail

// --- counts -----------------------------------------------------------------

AcceptabilityCounts::AcceptabilityCounts(std::size_t alternatives)
    : n_(alternatives),
      preference_(alternatives * alternatives, 0),
      indifference_(alternatives * alternatives, 0),
      rank_(alternatives * alternatives, 0) {}

void AcceptabilityCounts::merge(const AcceptabilityCounts& other) {
  if (other.n_ != n_) throw Error(Errc::MixedProblems, "cannot merge counts of different sizes");
  combinations_ += other.combinations_;
  for (std::size_t k = 0; k < preference_.size(); ++k) {
    preference_[k] += other.preference_[k];
    indifference_[k] += other.indifference_[k];
    rank_[k] += other.rank_[k];
  }
}

void AcceptabilityCounts::set_raw(std::uint64_t combinations, std::vector<std::uint64_t> preference,
                                  std::vector<std::uint64_t> indifference,
                                  std::vector<std::uint64_t> rank) {
  const std::size_t cells = n_ * n_;
  if (preference.size() != cells || indifference.size() != cells || rank.size() != cells) {
    throw Error(Errc::Schema, "count matrices do not match the number of alternatives");
  }
  combinations_ = combinations;
  preference_ = std::move(preference);
  indifference_ = std::move(indifference);
  rank_ = std::move(rank);
}

std::string_view to_string(Mode mode) {
  return mode == Mode::Enumerated ? "enumerated" : "sampled";
}

namespace {

double ratio(std::uint64_t count, std::uint64_t total) {
  return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
}

}  // namespace

double AcceptabilityResult::preference_probability(std::size_t i, std::size_t j) const {
  return ratio(counts.preference(i, j), counts.combinations());
}

double AcceptabilityResult::indifference_probability(std::size_t i, std::size_t j) const {
  return ratio(counts.indifference(i, j), counts.combinations());
}

double AcceptabilityResult::rank_probability(std::size_t i, std::size_t position) const {
  return ratio(counts.rank(i, position), counts.combinations());
}

// --- runs -------------------------------------------------------------------

namespace {

class ProgressTracker {
 public:
  ProgressTracker(std::uint64_t total, const std::function<void(double)>& callback)
      : total_(total), callback_(callback) {}

  void advance(std::uint64_t amount) {
    if (!callback_ || total_ == 0) return;
    const std::uint64_t done = done_.fetch_add(amount) + amount;
    const auto percent = static_cast<int>(done * 100 / total_);
    std::lock_guard lock(mutex_);
    if (percent > last_percent_) {
      last_percent_ = percent;
      callback_(static_cast<double>(done) / static_cast<double>(total_));
    }
  }

  void finish() {
    if (!callback_) return;
    std::lock_guard lock(mutex_);
    if (last_percent_ < 100) callback_(1.0);
    last_percent_ = 100;
  }

 private:
  std::uint64_t total_;
  const std::function<void(double)>& callback_;
  std::atomic<std::uint64_t> done_{0};
  std::mutex mutex_;
  int last_percent_ = -1;
};

// Splits [0, total) into `workers` contiguous ranges, runs `body(first, last,
// counts)` on each in its own thread, and merges the counts in range order.
AcceptabilityCounts run_partitioned(
    std::uint64_t total, unsigned workers, std::size_t alternatives,
    const std::function<void(std::uint64_t, std::uint64_t, AcceptabilityCounts&)>& body) {
  workers = std::max(1u, workers);
  if (total < workers) workers = static_cast<unsigned>(std::max<std::uint64_t>(1, total));
  std::vector<AcceptabilityCounts> partial(workers, AcceptabilityCounts(alternatives));
  if (workers == 1) {
    body(0, total, partial[0]);
    return partial[0];
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t first = total * w / workers;
      const std::uint64_t last = total * (w + 1) / workers;
      threads.emplace_back([&, w, first, last] {
        try {
          body(first, last, partial[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  AcceptabilityCounts merged(alternatives);
  for (const auto& p : partial) merged.merge(p);
  return merged;
}

// Accumulates one combination given its scaled vectors.
class Scorer {
 public:
  explicit Scorer(std::size_t criteria) : evaluations_(criteria, nullptr) {}

  void set(std::size_t criterion, const ScaledVector* vector) { evaluations_[criterion] = vector; }

  void add_to(AcceptabilityCounts& counts, const ScaledVector& weights) {
    if (detail::score_keys(evaluations_, weights, narrow_)) {
      counts.add(narrow_);
    } else {
      detail::score_keys(evaluations_, weights, wide_);
      counts.add(wide_);
    }
  }

 private:
  std::vector<const ScaledVector*> evaluations_;
  std::vector<__int128> narrow_;
  std::vector<BigInt> wide_;
};

std::uint64_t progress_stride(std::uint64_t total) { return std::max<std::uint64_t>(1, total / 1000); }

}  // namespace

BigInt total_space(const Problem& problem) {
  const auto graphs = ProblemGraphs::from(problem);
  BigInt total = count_trees(graphs.weights);
  for (const auto& g : graphs.criteria) total *= count_trees(g);
  return total;
}

AcceptabilityResult acceptability_enumerate(const Problem& problem, const RunOptions& options) {
  const auto graphs = ProblemGraphs::from(problem);
  const BigInt space = total_space(problem);
  if (space > options.cap) {
    throw Error(Errc::SpaceTooLarge,
                fmt::format("{} combinations exceed the enumeration cap of {}; use sampling",
                            space.str(), options.cap));
  }
  const auto total = space.convert_to<std::uint64_t>();
  const std::size_t m = graphs.criteria.size();

  // Tree vectors of every matrix, enumerated once.
  auto scaled_trees = [&](const ComparisonGraph& g) {
    std::vector<ScaledVector> out;
    for_each_tree(g, [&](const SpanningTree& t) { out.push_back(ScaledVector::from(tree_priority(t, g))); });
    return out;
  };
  const auto weight_vectors = scaled_trees(graphs.weights);
  std::vector<std::vector<ScaledVector>> criterion_vectors;
  for (const auto& g : graphs.criteria) criterion_vectors.push_back(scaled_trees(g));

  ProgressTracker progress(total, options.progress);
  const std::uint64_t stride = progress_stride(total);

  auto body = [&](std::uint64_t first, std::uint64_t last, AcceptabilityCounts& counts) {
    if (first >= last) return;
    // Mixed-radix digits of `first`: digit 0 is the weight tree, then criteria.
    std::vector<std::size_t> radix{weight_vectors.size()};
    for (const auto& v : criterion_vectors) radix.push_back(v.size());
    std::vector<std::size_t> digit(m + 1, 0);
    std::uint64_t rest = first;
    for (std::size_t d = m + 1; d-- > 0;) {
      digit[d] = static_cast<std::size_t>(rest % radix[d]);
      rest /= radix[d];
    }
    Scorer scorer(m);
    for (std::size_t j = 0; j < m; ++j) scorer.set(j, &criterion_vectors[j][digit[j + 1]]);
    std::uint64_t since_report = 0;
    for (std::uint64_t index = first; index < last; ++index) {
      scorer.add_to(counts, weight_vectors[digit[0]]);
      if (++since_report == stride) {
        progress.advance(since_report);
        since_report = 0;
      }
      // Odometer increment, least significant digit last.
      for (std::size_t d = m + 1; d-- > 0;) {
        if (++digit[d] < radix[d]) {
          if (d > 0) scorer.set(d - 1, &criterion_vectors[d - 1][digit[d]]);
          break;
        }
        digit[d] = 0;
        if (d > 0) scorer.set(d - 1, &criterion_vectors[d - 1][0]);
      }
    }
    progress.advance(since_report);
  };

  AcceptabilityResult result;
  result.mode = Mode::Enumerated;
  result.alternatives = problem.alternatives;
  result.problem_fingerprint = fingerprint(problem);
  result.total_space = space;
  result.counts = run_partitioned(total, options.workers, problem.alternative_count(), body);
  progress.finish();
  return result;
}

AcceptabilityResult acceptability_sample(const Problem& problem, const SamplePlan& plan,
                                         const RunOptions& options) {
  const auto graphs = ProblemGraphs::from(problem);
  const std::size_t m = graphs.criteria.size();
  ProgressTracker progress(plan.iterations, options.progress);
  const std::uint64_t stride = progress_stride(plan.iterations);

  auto body = [&](std::uint64_t first, std::uint64_t last, AcceptabilityCounts& counts) {
    Scorer scorer(m);
    std::vector<ScaledVector> evaluations(m);
    std::uint64_t since_report = 0;
    for (std::uint64_t index = first; index < last; ++index) {
      const TreeCombination c = draw_combination(graphs, plan.seed, index);
      for (std::size_t j = 0; j < m; ++j) {
        evaluations[j] = ScaledVector::from(tree_priority(c.criterion_trees[j], graphs.criteria[j]));
        scorer.set(j, &evaluations[j]);
      }
      scorer.add_to(counts, ScaledVector::from(tree_priority(c.weight_tree, graphs.weights)));
      if (++since_report == stride) {
        progress.advance(since_report);
        since_report = 0;
      }
    }
    progress.advance(since_report);
  };

  AcceptabilityResult result;
  result.mode = Mode::Sampled;
  result.alternatives = problem.alternatives;
  result.problem_fingerprint = fingerprint(problem);
  result.total_space = total_space(problem);
  result.plan = plan;
  result.counts = run_partitioned(plan.iterations, options.workers, problem.alternative_count(), body);
  progress.finish();
  return result;
}

// --- summaries --------------------------------------------------------------

Summary summarize(std::span<const AcceptabilityResult> results) {
  if (results.empty()) throw Error(Errc::MixedProblems, "nothing to summarize");
  const auto& first = results.front();
  for (const auto& r : results) {
    if (r.problem_fingerprint != first.problem_fingerprint || r.alternatives != first.alternatives) {
      throw Error(Errc::MixedProblems, "results come from different problems");
    }
  }
  const std::size_t n = first.alternatives.size();
  Summary summary;
  summary.alternatives = first.alternatives;
  summary.runs = results.size();
  summary.mode = first.mode;

  auto cell = [&](auto probability) {
    CellSummary out;
    double sum = 0.0;
    for (const auto& r : results) sum += probability(r);
    out.mean = sum / static_cast<double>(results.size());
    if (results.size() > 1) {
      double squares = 0.0;
      for (const auto& r : results) {
        const double d = probability(r) - out.mean;
        squares += d * d;
      }
      out.stddev = std::sqrt(squares / static_cast<double>(results.size() - 1));
    }
    return out;
  };
  auto grid = [&](auto probability) {
    std::vector<std::vector<CellSummary>> out(n, std::vector<CellSummary>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        out[i][j] = cell([&](const AcceptabilityResult& r) { return probability(r, i, j); });
      }
    }
    return out;
  };
  summary.preference = grid([](const AcceptabilityResult& r, std::size_t i, std::size_t j) {
    return r.preference_probability(i, j);
  });
  summary.indifference = grid([](const AcceptabilityResult& r, std::size_t i, std::size_t j) {
    return r.indifference_probability(i, j);
  });
  summary.rank = grid([](const AcceptabilityResult& r, std::size_t i, std::size_t p) {
    return r.rank_probability(i, p);
  });
  return summary;
}

}  // namespace pcsmaa
