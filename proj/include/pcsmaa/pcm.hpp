#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pcsmaa/error.hpp"
#include "pcsmaa/rational.hpp"

namespace pcsmaa {

using Index = std::size_t;

// "row is `value` times as preferred as col".
struct Judgement {
  Index row = 0;
  Index col = 0;
  Rational value;
};

// Matrix as supplied by the user: any value (including non-positive ones) may
// be present, `nullopt` marks a missing judgement.
using RawMatrix = std::vector<std::vector<std::optional<Rational>>>;

// Reciprocal judgement table that may still be disconnected. Every stored
// entry is positive and its mirror is its exact reciprocal; the diagonal is
// implicitly 1.
class JudgementTable {
 public:
  JudgementTable() = default;
  explicit JudgementTable(Index size);

  Index size() const noexcept { return size_; }

  // 1 on the diagonal, nullopt for a missing judgement.
  std::optional<Rational> at(Index row, Index col) const;
  bool has(Index row, Index col) const;

  // Sets (row, col) and mirrors the reciprocal into (col, row).
  void set(Index row, Index col, Rational value);
  void clear(Index row, Index col);

  // Stored judgements with row < col, in row-major order.
  std::vector<Judgement> judgements() const;
  std::size_t judgement_count() const;

  bool is_complete() const;
  bool is_connected() const;

  friend bool operator==(const JudgementTable&, const JudgementTable&) = default;

 private:
  void check_index(Index row, Index col) const;

  Index size_ = 0;
  std::vector<std::optional<Rational>> cells_;
};

// Connected reciprocal pairwise-comparison matrix. A 1x1 matrix is allowed so
// that a single-criterion problem has a (trivial) weight matrix.
class PairwiseMatrix {
 public:
  // Throws Error(DisconnectedGraph) when the comparison graph is not
  // connected, Error(UnsupportedSize) for an empty table.
  explicit PairwiseMatrix(JudgementTable table);

  Index size() const noexcept { return table_.size(); }
  std::optional<Rational> at(Index row, Index col) const { return table_.at(row, col); }
  bool is_complete() const { return table_.is_complete(); }
  const JudgementTable& table() const noexcept { return table_; }

  // Dense floating-point copy. Requires a complete matrix.
  std::vector<std::vector<double>> dense() const;

  friend bool operator==(const PairwiseMatrix&, const PairwiseMatrix&) = default;

 private:
  JudgementTable table_;
};

// Every structural problem in `raw` (shape, positivity, diagonal,
// reciprocity). Connectivity is not checked here.
std::vector<Violation> check_structure(const RawMatrix& raw);

// Builds the reciprocal table, auto-completing a missing mirror entry. Throws
// ValidationError listing every structural violation.
JudgementTable build_table(const RawMatrix& raw);

// build_table plus the connectivity requirement.
PairwiseMatrix validate(const RawMatrix& raw);

struct PriorityVector {
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }
};

struct ExactPriorityVector {
  std::vector<Rational> weights;

  std::size_t size() const noexcept { return weights.size(); }
  const Rational& operator[](std::size_t i) const { return weights[i]; }
  PriorityVector to_double() const;

  friend bool operator==(const ExactPriorityVector&, const ExactPriorityVector&) = default;
};

// Principal right eigenvector by power iteration (relative change below
// 1e-12, at most 10'000 iterations), normalized to sum 1.
PriorityVector priority_eigen(const PairwiseMatrix& matrix);

// Principal eigenvalue of a complete matrix.
double principal_eigenvalue(const PairwiseMatrix& matrix);

// Row geometric means normalized to sum 1.
PriorityVector priority_geomean(const PairwiseMatrix& matrix);

// Saaty random index for 3 <= n <= 10.
double random_index(Index n);

// ((lambda_max - n) / (n - 1)) / RI(n).
double consistency_ratio(const PairwiseMatrix& matrix);

// Ordered triple with entry(i,j) >= 1 and entry(j,k) >= 1 but entry(i,k) < 1.
struct Triad {
  Index first = 0;
  Index second = 0;
  Index third = 0;

  friend bool operator==(const Triad&, const Triad&) = default;
  friend auto operator<=>(const Triad&, const Triad&) = default;
};

// Violating triads, each preference cycle reported once (rotation starting
// at its smallest index), sorted.
std::vector<Triad> check_transitivity(const PairwiseMatrix& matrix);

// Whether entry(i,j) * entry(j,k) == entry(i,k) for every triple.
bool is_cardinally_consistent(const PairwiseMatrix& matrix);

struct Problem {
  std::vector<std::string> alternatives;
  std::vector<std::string> criteria;
  std::vector<PairwiseMatrix> criterion_matrices;
  PairwiseMatrix weight_matrix;

  Index alternative_count() const noexcept { return alternatives.size(); }
  Index criterion_count() const noexcept { return criteria.size(); }
};

// Problem whose matrices have passed the structural checks but may still be
// disconnected (incremental editing).
struct ProblemDraft {
  std::vector<std::string> alternatives;
  std::vector<std::string> criteria;
  std::vector<JudgementTable> criterion_tables;
  JudgementTable weight_table;

  // Connectivity violations, one per disconnected matrix.
  std::vector<Violation> connectivity_violations() const;
};

// Checks sizes and connectivity; throws ValidationError.
Problem to_problem(const ProblemDraft& draft);
ProblemDraft to_draft(const Problem& problem);

}  // namespace pcsmaa
