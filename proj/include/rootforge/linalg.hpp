#pragma once

/// @file linalg.hpp
/// @brief Small exact linear algebra over Q (and one integer-lattice kernel).
///
/// Everything here works on dense row vectors of Rat. Dimensions in this
/// project stay tiny (ambient spaces <= 9, fiber algebras <= 48 basis
/// elements), so plain Gaussian elimination with exact pivoting is both
/// simplest and fastest.

#include <optional>
#include <vector>

#include "rootforge/rational.hpp"

namespace rf {

using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;

/// Rank of a matrix (rows are vectors); does not modify the input.
int rank_of(QMat m);

/// Basis of the right kernel {x : m·x = 0} over Q^cols, in the canonical
/// reduced form (one vector per free column, with a 1 there and zeros in
/// the other free columns). Deterministic for deterministic input.
/// When free_cols is non-null it receives the ascending free-column
/// indices, aligned with the returned basis vectors.
QMat nullspace_of(QMat m, int cols, std::vector<int>* free_cols = nullptr);

/// Row-echelon "expander": fitted once against a spanning set, then used to
/// express further vectors in that basis. Rejects vectors outside the span.
class SpanSolver {
 public:
  /// @param basis  linearly independent spanning vectors (rows).
  explicit SpanSolver(QMat basis);

  int dimension() const { return static_cast<int>(basis_.size()); }

  /// Coordinates of v in the fitted basis, or nullopt if v is outside
  /// the span.
  std::optional<QVec> coords(const QVec& v) const;

 private:
  QMat basis_;     // original basis rows
  QMat echelon_;   // row-reduced copies
  QMat trace_;     // echelon_[i] = sum_j trace_[i][j] * basis_[j]
  std::vector<int> pivot_col_;
};

/// Membership test for the integer span (lattice) of a set of generators.
/// Generators may have rational entries; the lattice is sum of Z-multiples.
class LatticeMembership {
 public:
  explicit LatticeMembership(const QMat& generators);

  bool contains(const QVec& v) const;

 private:
  // Hermite-style reduced generators after clearing denominators by scale_.
  std::vector<std::vector<long long>> hnf_;
  std::vector<int> pivot_col_;
  long long scale_ = 1;
  size_t width_ = 0;
};

}  // namespace rf
