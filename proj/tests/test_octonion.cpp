#include <doctest.h>

#include <vector>

#include "rootforge/octonion.hpp"

using namespace rf;

namespace {

Octonion u(int i) { return Octonion::unit(i); }

QVec flatten(const QMat& m) {
  QVec out;
  for (const QVec& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace

TEST_CASE("the unit acts as a two-sided identity") {
  for (int i = 0; i < 8; ++i) {
    CHECK(Octonion::one() * u(i) == u(i));
    CHECK(u(i) * Octonion::one() == u(i));
  }
  CHECK(Octonion::one().trace() == Rat(1));
}

TEST_CASE("vector-matrix products follow the cross/dot rules") {
  // Coordinate order: e1, e2, u1, u2, u3, v1, v2, v3.
  CHECK(u(0) * u(0) == u(0));          // e1 idempotent
  CHECK((u(0) * u(1)).is_zero());      // orthogonal idempotents
  CHECK(u(0) * u(2) == u(2));          // e1 * u1 = u1
  CHECK((u(2) * u(0)).is_zero());      // u1 * e1 = 0
  CHECK(u(2) * u(3) == u(7));          // u1 * u2 = v3 (cross product)
  CHECK(u(3) * u(2) == u(7) * Rat(-1));
  CHECK(u(2) * u(5) == u(0));          // u1 * v1 = e1 (dot product)
  CHECK(u(5) * u(2) == u(1));          // v1 * u1 = e2
  CHECK((u(2) * u(6)).is_zero());      // u1 * v2 = 0
  CHECK(u(5) * u(6) == u(4) * Rat(-1));  // v1 * v2 = -u3
}

TEST_CASE("traces and the trace-zero star product") {
  CHECK(u(0).trace() == Rat(1, 2));
  CHECK(u(1).trace() == Rat(1, 2));
  for (int i = 2; i < 8; ++i) CHECK(u(i).trace() == Rat(0));
  // x*y = t(xy) 1 + x star y, so star is the product with the trace removed.
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      Octonion p = u(i) * u(j);
      Octonion s = u(i).star(u(j));
      CHECK(p == Octonion::one() * p.trace() + s);
      CHECK(s.trace() == Rat(0));
    }
}

TEST_CASE("the algebra is alternative though not associative") {
  std::array<Rat, 8> ca{Rat(1), Rat(-2), Rat(0), Rat(3), Rat(1, 2), Rat(0),
                        Rat(1), Rat(-1)};
  std::array<Rat, 8> cb{Rat(0), Rat(1), Rat(2), Rat(-1), Rat(0), Rat(5),
                        Rat(1, 3), Rat(2)};
  Octonion x(ca), y(cb);
  CHECK((x * x) * y == x * (x * y));
  CHECK((y * x) * x == y * (x * x));
  // A witness of non-associativity keeps the test honest.
  Octonion lhs = (u(2) * u(3)) * u(5);
  Octonion rhs = u(2) * (u(3) * u(5));
  CHECK_FALSE(lhs == rhs);
}

TEST_CASE("multiplication operators match the product") {
  std::array<Rat, 8> cx{Rat(2), Rat(1), Rat(-1), Rat(0), Rat(4), Rat(1, 2),
                        Rat(0), Rat(3)};
  Octonion x(cx);
  QMat lm = left_mult(x), rm = right_mult(x);
  for (int j = 0; j < 8; ++j) {
    CHECK(apply_map(lm, u(j)) == x * u(j));
    CHECK(apply_map(rm, u(j)) == u(j) * x);
  }
}

TEST_CASE("inner derivations satisfy the Leibniz rule and kill the unit") {
  std::vector<std::pair<int, int>> gens = {{2, 5}, {2, 3}, {0, 4}, {6, 7}};
  for (auto [a, b] : gens) {
    QMat d = derivation_dxy(u(a), u(b));
    CHECK(apply_map(d, Octonion::one()).is_zero());
    for (int i = 0; i < 8; ++i) {
      CHECK(apply_map(d, u(i)).trace() == Rat(0));
      for (int j = 0; j < 8; ++j) {
        Octonion want =
            apply_map(d, u(i)) * u(j) + u(i) * apply_map(d, u(j));
        CHECK(apply_map(d, u(i) * u(j)) == want);
      }
    }
  }
}

TEST_CASE("the inner derivations span a 14-dimensional algebra") {
  QMat rows;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      rows.push_back(flatten(derivation_dxy(u(i), u(j))));
  CHECK(rank_of(rows) == 14);
}

TEST_CASE("unit weights trace the hexagram") {
  CHECK(octonion_unit_weight(0).is_zero());
  CHECK(octonion_unit_weight(1).is_zero());
  RootVector sum;
  std::vector<RootVector> nonzero;
  for (int i = 2; i < 8; ++i) {
    RootVector w = octonion_unit_weight(i);
    CHECK_FALSE(w.is_zero());
    CHECK(norm2(w) == Rat(2));
    sum = sum + w;
    nonzero.push_back(w);
  }
  CHECK(sum.is_zero());
  // u and v weights are opposite.
  for (int k = 0; k < 3; ++k)
    CHECK(octonion_unit_weight(2 + k) == -octonion_unit_weight(5 + k));
}
