#include "pcsmaa/pcm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

namespace pcsmaa {

// --- JudgementTable ---------------------------------------------------------

JudgementTable::JudgementTable(Index size) : size_(size), cells_(size * size) {}

void JudgementTable::check_index(Index row, Index col) const {
  if (row >= size_ || col >= size_) {
    throw Error(Errc::IndexOutOfRange,
                fmt::format("entry ({}, {}) outside a {}x{} matrix", row, col, size_, size_));
  }
}

std::optional<Rational> JudgementTable::at(Index row, Index col) const {
  check_index(row, col);
  if (row == col) return Rational(1);
  return cells_[row * size_ + col];
}

bool JudgementTable::has(Index row, Index col) const { return at(row, col).has_value(); }

void JudgementTable::set(Index row, Index col, Rational value) {
  check_index(row, col);
  if (row == col) {
    throw Error(Errc::BadDiagonal,
                fmt::format("diagonal entry ({}, {}) is fixed at 1", row, col));
  }
  if (!value.is_positive()) {
    throw Error(Errc::NonPositiveEntry,
                fmt::format("entry ({}, {}) = {} is not positive", row, col, value.to_string()));
  }
  cells_[row * size_ + col] = value;
  cells_[col * size_ + row] = value.reciprocal();
}

void JudgementTable::clear(Index row, Index col) {
  check_index(row, col);
  if (row == col) {
    throw Error(Errc::BadDiagonal,
                fmt::format("diagonal entry ({}, {}) cannot be cleared", row, col));
  }
  cells_[row * size_ + col].reset();
  cells_[col * size_ + row].reset();
}

std::vector<Judgement> JudgementTable::judgements() const {
  std::vector<Judgement> out;
  for (Index i = 0; i < size_; ++i) {
    for (Index j = i + 1; j < size_; ++j) {
      if (const auto& v = cells_[i * size_ + j]) out.push_back({i, j, *v});
    }
  }
  return out;
}

std::size_t JudgementTable::judgement_count() const {
  std::size_t count = 0;
  for (Index i = 0; i < size_; ++i) {
    for (Index j = i + 1; j < size_; ++j) count += cells_[i * size_ + j].has_value();
  }
  return count;
}

bool JudgementTable::is_complete() const {
  return judgement_count() == size_ * (size_ - (size_ > 0 ? 1 : 0)) / 2;
}

bool JudgementTable::is_connected() const {
  if (size_ == 0) return false;
  std::vector<bool> seen(size_, false);
  std::vector<Index> stack{0};
  seen[0] = true;
  Index reached = 1;
  while (!stack.empty()) {
    const Index i = stack.back();
    stack.pop_back();
    for (Index j = 0; j < size_; ++j) {
      if (!seen[j] && cells_[i * size_ + j]) {
        seen[j] = true;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == size_;
}

// --- PairwiseMatrix ---------------------------------------------------------

PairwiseMatrix::PairwiseMatrix(JudgementTable table) : table_(std::move(table)) {
  if (table_.size() < 1) {
    throw Error(Errc::UnsupportedSize, "a pairwise matrix needs at least 1 item");
  }
  if (!table_.is_connected()) {
    throw Error(Errc::DisconnectedGraph,
                "comparison graph is disconnected; add judgements linking every item");
  }
}

std::vector<std::vector<double>> PairwiseMatrix::dense() const {
  if (!is_complete()) throw Error(Errc::IncompleteMatrix, "matrix has missing judgements");
  const Index n = size();
  std::vector<std::vector<double>> out(n, std::vector<double>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out[i][j] = at(i, j)->to_double();
  }
  return out;
}

// --- validation -------------------------------------------------------------

std::vector<Violation> check_structure(const RawMatrix& raw) {
  std::vector<Violation> out;
  const Index n = raw.size();
  for (Index i = 0; i < n; ++i) {
    if (raw[i].size() != n) {
      out.push_back({Errc::NotSquare, {}, i, 0,
                     fmt::format("row {} has {} entries, expected {}", i, raw[i].size(), n)});
    }
  }
  if (!out.empty()) return out;
  if (n < 1) {
    out.push_back({Errc::UnsupportedSize, {}, 0, 0, "a pairwise matrix needs at least 1 item"});
    return out;
  }
  for (Index i = 0; i < n; ++i) {
    if (const auto& d = raw[i][i]; d && *d != Rational(1)) {
      out.push_back({Errc::BadDiagonal, {}, i, i,
                     fmt::format("diagonal entry ({}, {}) is {}, must be 1 or empty; "
                                 "a non-1 diagonal is usually a typo for 1",
                                 i, i, d->to_string())});
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j || !raw[i][j]) continue;
      if (!raw[i][j]->is_positive()) {
        out.push_back({Errc::NonPositiveEntry, {}, i, j,
                       fmt::format("entry ({}, {}) = {} is not positive", i, j,
                                   raw[i][j]->to_string())});
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const auto& a = raw[i][j];
      const auto& b = raw[j][i];
      if (!a || !b || !a->is_positive() || !b->is_positive()) continue;
      // Exact check: values are stored as rationals, so the product must be 1.
      if (*a * *b != Rational(1)) {
        out.push_back({Errc::ReciprocityViolation, {}, i, j,
                       fmt::format("entries ({}, {}) = {} and ({}, {}) = {} are not reciprocal",
                                   i, j, a->to_string(), j, i, b->to_string())});
      }
    }
  }
  return out;
}

JudgementTable build_table(const RawMatrix& raw) {
  auto violations = check_structure(raw);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  const Index n = raw.size();
  JudgementTable table(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (raw[i][j]) {
        table.set(i, j, *raw[i][j]);
      } else if (raw[j][i]) {
        table.set(j, i, *raw[j][i]);
      }
    }
  }
  return table;
}

PairwiseMatrix validate(const RawMatrix& raw) { return PairwiseMatrix(build_table(raw)); }

// --- priorities -------------------------------------------------------------

PriorityVector ExactPriorityVector::to_double() const {
  PriorityVector out;
  out.weights.reserve(weights.size());
  for (const auto& w : weights) out.weights.push_back(w.to_double());
  return out;
}

namespace {

std::vector<double> multiply(const std::vector<std::vector<double>>& a,
                             const std::vector<double>& x) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

void normalize(std::vector<double>& v) {
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= sum;
}

constexpr int kMaxPowerIterations = 10'000;
constexpr double kPowerTolerance = 1e-12;

std::vector<double> power_iteration(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  for (int iter = 0; iter < kMaxPowerIterations; ++iter) {
    auto next = multiply(a, w);
    normalize(next);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      change = std::max(change, std::abs(next[i] - w[i]) / next[i]);
    }
    w = std::move(next);
    if (change < kPowerTolerance) return w;
  }
  throw Error(Errc::NoConvergence, "power iteration did not converge");
}

}  // namespace

PriorityVector priority_eigen(const PairwiseMatrix& matrix) {
  return PriorityVector{power_iteration(matrix.dense())};
}

double principal_eigenvalue(const PairwiseMatrix& matrix) {
  const auto a = matrix.dense();
  const auto w = power_iteration(a);
  const auto aw = multiply(a, w);
  // w sums to 1, so the sum of A w is lambda.
  return std::accumulate(aw.begin(), aw.end(), 0.0);
}

PriorityVector priority_geomean(const PairwiseMatrix& matrix) {
  const auto a = matrix.dense();
  const std::size_t n = a.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    double log_sum = 0.0;
    for (double x : a[i]) log_sum += std::log(x);
    w[i] = std::exp(log_sum / static_cast<double>(n));
  }
  normalize(w);
  return PriorityVector{std::move(w)};
}

double random_index(Index n) {
  switch (n) {
    case 3: return 0.58;
    case 4: return 0.90;
    case 5: return 1.12;
    case 6: return 1.24;
    case 7: return 1.32;
    case 8: return 1.41;
    case 9: return 1.45;
    case 10: return 1.49;
    default:
      throw Error(Errc::UnsupportedSize,
                  fmt::format("no random index for n = {} (supported: 3..10)", n));
  }
}

double consistency_ratio(const PairwiseMatrix& matrix) {
  const Index n = matrix.size();
  if (!matrix.is_complete()) throw Error(Errc::IncompleteMatrix, "matrix has missing judgements");
  const double ri = random_index(n);
  const double lambda = principal_eigenvalue(matrix);
  const double ci = (lambda - static_cast<double>(n)) / static_cast<double>(n - 1);
  // lambda_max >= n for reciprocal matrices; clip round-off below zero.
  return std::max(0.0, ci / ri);
}

std::vector<Triad> check_transitivity(const PairwiseMatrix& matrix) {
  const Index n = matrix.size();
  const Rational one(1);
  std::set<Triad> found;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto ij = matrix.at(i, j);
      if (!ij || *ij < one) continue;
      for (Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const auto jk = matrix.at(j, k);
        const auto ik = matrix.at(i, k);
        if (!jk || !ik || *jk < one || !(*ik < one)) continue;
        Triad t{i, j, k};
        if (j < t.first && j < k) t = {j, k, i};
        if (k < t.first) t = {k, i, j};
        found.insert(t);
      }
    }
  }
  return {found.begin(), found.end()};
}

bool is_cardinally_consistent(const PairwiseMatrix& matrix) {
  const Index n = matrix.size();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      for (Index k = 0; k < n; ++k) {
        const auto ij = matrix.at(i, j);
        const auto jk = matrix.at(j, k);
        const auto ik = matrix.at(i, k);
        if (ij && jk && ik && *ij * *jk != *ik) return false;
      }
    }
  }
  return true;
}

// --- problems ---------------------------------------------------------------

std::vector<Violation> ProblemDraft::connectivity_violations() const {
  std::vector<Violation> out;
  for (std::size_t j = 0; j < criterion_tables.size(); ++j) {
    if (!criterion_tables[j].is_connected()) {
      out.push_back({Errc::DisconnectedGraph, criteria.at(j), 0, 0,
                     fmt::format("comparison graph of '{}' is disconnected", criteria.at(j))});
    }
  }
  if (!weight_table.is_connected()) {
    out.push_back({Errc::DisconnectedGraph, "weights", 0, 0,
                   "comparison graph of the criteria weights is disconnected"});
  }
  return out;
}

Problem to_problem(const ProblemDraft& draft) {
  std::vector<Violation> violations;
  const Index n = draft.alternatives.size();
  const Index m = draft.criteria.size();
  if (draft.criterion_tables.size() != m) {
    violations.push_back({Errc::Schema, {}, 0, 0, "one matrix per criterion is required"});
  }
  for (std::size_t j = 0; j < draft.criterion_tables.size() && j < m; ++j) {
    if (draft.criterion_tables[j].size() != n) {
      violations.push_back({Errc::Schema, draft.criteria[j], 0, 0,
                            fmt::format("matrix '{}' is {}x{}, expected {}x{}", draft.criteria[j],
                                        draft.criterion_tables[j].size(),
                                        draft.criterion_tables[j].size(), n, n)});
    }
  }
  if (draft.weight_table.size() != m) {
    violations.push_back({Errc::Schema, "weights", 0, 0,
                          fmt::format("weight matrix must be {}x{}", m, m)});
  }
  if (n < 2 || m < 1) {
    violations.push_back({Errc::UnsupportedSize, {}, 0, 0,
                          "need at least 2 alternatives and 1 criterion"});
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  violations = draft.connectivity_violations();
  if (!violations.empty()) throw ValidationError(std::move(violations));

  std::vector<PairwiseMatrix> criteria;
  criteria.reserve(m);
  for (const auto& t : draft.criterion_tables) criteria.emplace_back(t);
  return Problem{draft.alternatives, draft.criteria, std::move(criteria),
                 PairwiseMatrix(draft.weight_table)};
}

ProblemDraft to_draft(const Problem& problem) {
  ProblemDraft draft{problem.alternatives, problem.criteria, {}, problem.weight_matrix.table()};
  for (const auto& m : problem.criterion_matrices) draft.criterion_tables.push_back(m.table());
  return draft;
}

}  // namespace pcsmaa
