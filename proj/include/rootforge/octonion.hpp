#pragma once

/// @file octonion.hpp
/// @brief Split octonions as Zorn vector matrices over Q, their derivation
/// maps, and the pinned weight grading used by the G2-type constructions.
///
/// An element is stored as 8 exact coordinates over the basis
///   e1 = (1,0;0,0), e2 = (0,0;0,1), u_i = (0,e_i;0,0), v_i = (0,0;e_i,0)
/// with the Zorn product
///   (a,v;w,b)(a',v';w',b') =
///     (aa' + v·w', av' + b'v − w×w'; a'w + bw' + v×v', bb' + w·v').
/// The unit is e1+e2; the normalized trace t(a,v;w,b) = (a+b)/2 satisfies
/// t(1) = 1, and the trace-zero part is spanned by e1−e2, u1..u3, v1..v3.

#include <array>
#include <string>

#include "rootforge/linalg.hpp"
#include "rootforge/rational.hpp"
#include "rootforge/rootvec.hpp"

namespace rf {

class Octonion {
 public:
  /// Coordinate order: [e1, e2, u1, u2, u3, v1, v2, v3].
  Octonion() { c_.fill(Rat(0)); }
  explicit Octonion(std::array<Rat, 8> c) : c_(std::move(c)) {}

  static Octonion unit(int i);  // basis element by coordinate index
  static Octonion one();        // e1 + e2
  static std::string unit_name(int i);

  const Rat& coord(int i) const { return c_[i]; }
  Rat& coord(int i) { return c_[i]; }

  Octonion operator+(const Octonion& o) const;
  Octonion operator-(const Octonion& o) const;
  Octonion operator*(const Octonion& o) const;  // Zorn product
  Octonion operator*(const Rat& q) const;
  bool operator==(const Octonion& o) const { return c_ == o.c_; }
  bool is_zero() const;

  /// Normalized trace: t(1) = 1, t = 0 on the seven trace-zero units.
  Rat trace() const;
  /// Trace-zero product part: x*y with xy = t(xy)·1 + x∗y.
  Octonion star(const Octonion& o) const;

  std::string str() const;

 private:
  std::array<Rat, 8> c_;
};

/// Left- and right-multiplication operators as exact 8×8 matrices
/// (column j = x · unit(j), resp. unit(j) · x).
QMat left_mult(const Octonion& x);
QMat right_mult(const Octonion& x);

/// The inner derivation D_{x,y} = ¼(L_{[x,y]} − R_{[x,y]} − 3[L_x, R_y]),
/// returned as an exact 8×8 matrix. Annihilates 1, preserves the trace-zero
/// part, and satisfies the Leibniz rule.
QMat derivation_dxy(const Octonion& x, const Octonion& y);

/// Applies an 8×8 map to an element.
Octonion apply_map(const QMat& m, const Octonion& x);

/// Weight of a basis unit under the pinned diagonal torus: e1, e2 are
/// weight 0, u1, u2, u3 carry ε1−ε2, ε2−ε3, ε3−ε1 and v_i the negatives.
/// The nonzero unit weights are exactly the six short roots of the
/// three-coordinate hexagonal system.
RootVector octonion_unit_weight(int i);

}  // namespace rf
