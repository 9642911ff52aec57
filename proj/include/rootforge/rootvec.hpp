#pragma once

/// @file rootvec.hpp
/// @brief Sparse exact vectors split into epsilon- and null-coordinates.
///
/// A root lives in V = V_eps + V_null. The symmetric form pairs only the
/// epsilon part; null coordinates are isotropic and orthogonal to
/// everything, which is exactly what makes the affine combinatorics work.
/// Coordinates are kept sorted by index with no explicit zeros, so equality,
/// ordering and hashing are structural.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rootforge/rational.hpp"

namespace rf {

using Coord = std::pair<int, Rat>;  // (index, value), value != 0

/// Vector with sparse rational coordinates in two blocks.
class RootVector {
 public:
  RootVector() = default;

  /// Builds from possibly unsorted/duplicated coordinate lists.
  RootVector(std::vector<Coord> eps, std::vector<Coord> nulls);

  static RootVector eps_unit(int i) { return RootVector({{i, Rat(1)}}, {}); }
  static RootVector null_unit(int j, const Rat& v = Rat(1)) {
    return RootVector({}, {{j, v}});
  }

  const std::vector<Coord>& eps() const { return eps_; }
  const std::vector<Coord>& nulls() const { return nulls_; }

  bool is_zero() const { return eps_.empty() && nulls_.empty(); }
  bool null_free() const { return nulls_.empty(); }

  Rat eps_at(int i) const;
  Rat null_at(int j) const;

  /// The epsilon part alone (null coordinates dropped).
  RootVector eps_part() const { return RootVector(eps_, {}); }
  /// The null part alone.
  RootVector null_part() const { return RootVector({}, nulls_); }

  RootVector operator+(const RootVector& o) const;
  RootVector operator-(const RootVector& o) const;
  RootVector operator*(const Rat& c) const;
  RootVector operator-() const { return *this * Rat(-1); }
  bool operator==(const RootVector& o) const {
    return eps_ == o.eps_ && nulls_ == o.nulls_;
  }

  /// Deterministic total order (lexicographic over coordinate lists).
  bool operator<(const RootVector& o) const;

  /// Adds v to null coordinate j.
  RootVector with_null(int j, const Rat& v) const;

  size_t hash() const;
  std::string str() const;

  friend Rat form(const RootVector& a, const RootVector& b);

 private:
  std::vector<Coord> eps_;
  std::vector<Coord> nulls_;
};

/// Symmetric bilinear form: sum over shared epsilon coordinates.
Rat form(const RootVector& a, const RootVector& b);

/// Squared length (a, a).
inline Rat norm2(const RootVector& a) { return form(a, a); }

/// Cartan integer <a, b> = 2(a,b)/(b,b). Throws std::domain_error when b is
/// isotropic; throws std::domain_error when the value is not an integer
/// (callers verifying axiom A2 should catch or pre-check with cartan_ok).
long long cartan_int(const RootVector& a, const RootVector& b);

/// Whether 2(a,b)/(b,b) is defined and integral.
bool cartan_ok(const RootVector& a, const RootVector& b);

/// Reflection of b in the hyperplane of a: b - <b,a> a.
RootVector reflect(const RootVector& b, const RootVector& a);

}  // namespace rf

template <>
struct std::hash<rf::RootVector> {
  size_t operator()(const rf::RootVector& v) const { return v.hash(); }
};
