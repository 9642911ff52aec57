#include <doctest.h>

#include <set>

#include "rootforge/fiber.hpp"
#include "rootforge/rootsys.hpp"

using namespace rf;

namespace {

QVec transpose_flat(int n, const QVec& a) {
  QVec t(a.size(), Rat(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[j * n + i] = a[i * n + j];
  return t;
}

std::multiset<RootVector> nonzero_weights(const FiberBasis& fb) {
  std::multiset<RootVector> out;
  for (const FiberElement& e : fb.elements())
    if (!e.weight.is_zero()) out.insert(e.weight);
  return out;
}

int zero_weights(const FiberBasis& fb) {
  int z = 0;
  for (const FiberElement& e : fb.elements())
    if (e.weight.is_zero()) ++z;
  return z;
}

std::multiset<RootVector> root_multiset(Family f, int n) {
  RootSystem sys = generate(RootSystemDesc{f, n});
  return {sys.roots.begin(), sys.roots.end()};
}

}  // namespace

TEST_CASE("fiber dimensions match the classical formulas") {
  CHECK(build_fiber(FiberKind::special_linear, 2).dim() == 3);
  CHECK(build_fiber(FiberKind::special_linear, 3).dim() == 8);
  CHECK(build_fiber(FiberKind::odd_orthogonal, 1).dim() == 3);
  CHECK(build_fiber(FiberKind::odd_orthogonal, 2).dim() == 10);
  CHECK(build_fiber(FiberKind::odd_symmetric, 2).dim() == 14);
  CHECK(build_fiber(FiberKind::symplectic, 2).dim() == 10);
  CHECK(build_fiber(FiberKind::symp_symmetric, 1).dim() == 0);
  CHECK(build_fiber(FiberKind::symp_symmetric, 2).dim() == 5);
  CHECK(build_fiber(FiberKind::even_orthogonal, 1).dim() == 1);
  CHECK(build_fiber(FiberKind::even_orthogonal, 2).dim() == 6);
  CHECK(build_fiber(FiberKind::natural_vector, 2).dim() == 5);
  CHECK(build_fiber(FiberKind::octonion_derivations, 3).dim() == 14);
  CHECK(build_fiber(FiberKind::octonion_traceless, 3).dim() == 7);
}

TEST_CASE("inadmissible fiber sizes are rejected") {
  CHECK_THROWS_AS(build_fiber(FiberKind::special_linear, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_fiber(FiberKind::octonion_derivations, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_fiber(FiberKind::octonion_traceless, 4),
                  std::invalid_argument);
}

TEST_CASE("weight multisets reproduce the expected root data") {
  FiberBasis sl2 = build_fiber(FiberKind::special_linear, 2);
  CHECK(zero_weights(sl2) == 1);
  CHECK(nonzero_weights(sl2).size() == 2);

  FiberBasis so5 = build_fiber(FiberKind::odd_orthogonal, 2);
  CHECK(zero_weights(so5) == 2);
  CHECK(nonzero_weights(so5) == root_multiset(Family::B, 2));

  FiberBasis sp4 = build_fiber(FiberKind::symplectic, 2);
  CHECK(zero_weights(sp4) == 2);
  CHECK(nonzero_weights(sp4) == root_multiset(Family::C, 2));

  FiberBasis sym5 = build_fiber(FiberKind::odd_symmetric, 2);
  CHECK(zero_weights(sym5) == 2);
  CHECK(nonzero_weights(sym5) == root_multiset(Family::BC, 2));

  FiberBasis oct = build_fiber(FiberKind::octonion_traceless, 3);
  CHECK(zero_weights(oct) == 1);
  for (const RootVector& w : nonzero_weights(oct)) CHECK(norm2(w) == Rat(2));

  FiberBasis der = build_fiber(FiberKind::octonion_derivations, 3);
  CHECK(nonzero_weights(der) == root_multiset(Family::G2, 3));
  CHECK(zero_weights(der) == 2);
}

TEST_CASE("matrix fibers satisfy their defining form relations") {
  struct Case {
    FiberKind kind;
    QMat form;
    Rat sign;
  };
  std::vector<Case> cases = {
      {FiberKind::odd_orthogonal, odd_form_matrix(2), Rat(-1)},
      {FiberKind::odd_symmetric, odd_form_matrix(2), Rat(1)},
      {FiberKind::symplectic, symplectic_form_matrix(2), Rat(-1)},
      {FiberKind::symp_symmetric, symplectic_form_matrix(2), Rat(1)},
      {FiberKind::even_orthogonal, even_form_matrix(2), Rat(-1)},
  };
  for (const Case& c : cases) {
    FiberBasis fb = build_fiber(c.kind, 2);
    int n = fb.matrix_size();
    QVec s = flatten(c.form);
    for (const FiberElement& e : fb.elements()) {
      QVec lhs = mat_product(n, s, e.flat);
      QVec rhs = mat_product(n, transpose_flat(n, e.flat), s);
      for (size_t k = 0; k < lhs.size(); ++k) CHECK(lhs[k] == rhs[k] * c.sign);
      if (c.kind != FiberKind::even_orthogonal)
        CHECK(mat_trace(n, e.flat) == Rat(0));
    }
  }
}

TEST_CASE("form matrices have the advertised symmetry and full rank") {
  for (int i : {1, 2, 3}) {
    QMat s = odd_form_matrix(i);
    QMat sm = symplectic_form_matrix(i);
    QMat sp = even_form_matrix(i);
    CHECK(rank_of(s) == 2 * i + 1);
    CHECK(rank_of(sm) == 2 * i);
    CHECK(rank_of(sp) == 2 * i);
    for (size_t a = 0; a < s.size(); ++a)
      for (size_t b = 0; b < s.size(); ++b) CHECK(s[a][b] == s[b][a]);
    for (size_t a = 0; a < sm.size(); ++a)
      for (size_t b = 0; b < sm.size(); ++b) {
        CHECK(sm[a][b] == sm[b][a] * Rat(-1));
        CHECK(sp[a][b] == sp[b][a]);
      }
  }
}

TEST_CASE("coordinates and assembly are mutually inverse") {
  for (FiberKind k : {FiberKind::odd_orthogonal, FiberKind::symplectic,
                      FiberKind::octonion_derivations}) {
    FiberBasis fb = build_fiber(k, k == FiberKind::octonion_derivations ? 3 : 2);
    QVec coeff(fb.dim());
    for (int i = 0; i < fb.dim(); ++i) coeff[i] = Rat(2 * i - 3, 1 + i % 3);
    QVec flat = fb.assemble(coeff);
    QVec back = fb.coords(flat);
    CHECK(back == coeff);
  }
  // Vectors outside the span are rejected: a non-traceless matrix cannot be
  // expressed in the traceless basis.
  FiberBasis sl2 = build_fiber(FiberKind::special_linear, 2);
  QVec identity{Rat(1), Rat(0), Rat(0), Rat(1)};
  CHECK_THROWS_AS(sl2.coords(identity), std::invalid_argument);
}

TEST_CASE("rank-two maps span the odd orthogonal algebra") {
  for (int i : {1, 2, 3}) {
    int n = 2 * i + 1;
    QMat rows;
    for (int a = 0; a < n; ++a) {
      QVec ea(n, Rat(0));
      ea[a] = Rat(1);
      for (int b = a + 1; b < n; ++b) {
        QVec eb(n, Rat(0));
        eb[b] = Rat(1);
        rows.push_back(dvv_flat(i, ea, eb));
      }
    }
    CHECK(rank_of(rows) == i * (2 * i + 1));
  }

  // D_{v,v} = 0 and antisymmetry in the arguments.
  QVec v{Rat(1), Rat(2), Rat(0), Rat(-1), Rat(3)};
  QVec w{Rat(0), Rat(1), Rat(1), Rat(2), Rat(-2)};
  QVec zero = dvv_flat(2, v, v);
  for (const Rat& q : zero) CHECK(q.is_zero());
  QVec dvw = dvv_flat(2, v, w);
  QVec dwv = dvv_flat(2, w, v);
  for (size_t k = 0; k < dvw.size(); ++k) CHECK(dvw[k] == dwv[k] * Rat(-1));

  // Each map lands in the odd orthogonal fiber.
  FiberBasis so5 = build_fiber(FiberKind::odd_orthogonal, 2);
  CHECK_NOTHROW(so5.coords(dvw));
}

TEST_CASE("the reference pairing is associative for the bracket") {
  FiberBasis fb = build_fiber(FiberKind::odd_orthogonal, 2);
  int n = fb.matrix_size();
  const auto& els = fb.elements();
  for (size_t a = 0; a < els.size(); a += 3)
    for (size_t b = 1; b < els.size(); b += 4)
      for (size_t c = 2; c < els.size(); c += 5) {
        QVec ab = mat_commutator(n, els[a].flat, els[b].flat);
        QVec ac = mat_commutator(n, els[a].flat, els[c].flat);
        Rat lhs = fiber_pairing(fb, ab, els[c].flat);
        Rat rhs = fiber_pairing(fb, els[b].flat, ac);
        CHECK(lhs == rhs * Rat(-1));
      }
}

TEST_CASE("the natural pairing matches the explicit form") {
  QVec u{Rat(1), Rat(0), Rat(2), Rat(-1), Rat(1)};
  QVec w{Rat(0), Rat(3), Rat(1), Rat(1), Rat(-2)};
  QMat s = odd_form_matrix(2);
  Rat expect(0);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) expect = expect + u[a] * s[a][b] * w[b];
  CHECK(natural_pairing(2, u, w) == expect);
  FiberBasis nat = build_fiber(FiberKind::natural_vector, 2);
  CHECK(fiber_pairing(nat, u, w) == expect);
}
