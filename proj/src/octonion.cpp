#include "rootforge/octonion.hpp"

#include <stdexcept>

namespace rf {

namespace {

using V3 = std::array<Rat, 3>;

Rat dot(const V3& a, const V3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

V3 cross(const V3& a, const V3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

Octonion Octonion::unit(int i) {
  if (i < 0 || i > 7) throw std::invalid_argument("octonion: unit index");
  Octonion x;
  x.c_[i] = Rat(1);
  return x;
}

Octonion Octonion::one() {
  Octonion x;
  x.c_[0] = Rat(1);
  x.c_[1] = Rat(1);
  return x;
}

std::string Octonion::unit_name(int i) {
  static const char* names[8] = {"e1", "e2", "u1", "u2", "u3",
                                 "v1", "v2", "v3"};
  if (i < 0 || i > 7) throw std::invalid_argument("octonion: unit index");
  return names[i];
}

Octonion Octonion::operator+(const Octonion& o) const {
  Octonion r;
  for (int i = 0; i < 8; ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

Octonion Octonion::operator-(const Octonion& o) const {
  Octonion r;
  for (int i = 0; i < 8; ++i) r.c_[i] = c_[i] - o.c_[i];
  return r;
}

Octonion Octonion::operator*(const Rat& q) const {
  Octonion r;
  for (int i = 0; i < 8; ++i) r.c_[i] = c_[i] * q;
  return r;
}

Octonion Octonion::operator*(const Octonion& o) const {
  const Rat& a = c_[0];
  const Rat& b = c_[1];
  V3 v{c_[2], c_[3], c_[4]};
  V3 w{c_[5], c_[6], c_[7]};
  const Rat& a2 = o.c_[0];
  const Rat& b2 = o.c_[1];
  V3 v2{o.c_[2], o.c_[3], o.c_[4]};
  V3 w2{o.c_[5], o.c_[6], o.c_[7]};

  Rat ra = a * a2 + dot(v, w2);
  Rat rb = b * b2 + dot(w, v2);
  V3 cvw = cross(w, w2);
  V3 cvv = cross(v, v2);
  Octonion r;
  r.c_[0] = ra;
  r.c_[1] = rb;
  for (int i = 0; i < 3; ++i) {
    r.c_[2 + i] = a * v2[i] + b2 * v[i] - cvw[i];
    r.c_[5 + i] = a2 * w[i] + b * w2[i] + cvv[i];
  }
  return r;
}

bool Octonion::is_zero() const {
  for (const Rat& x : c_)
    if (!x.is_zero()) return false;
  return true;
}

Rat Octonion::trace() const { return (c_[0] + c_[1]) / Rat(2); }

Octonion Octonion::star(const Octonion& o) const {
  Octonion p = *this * o;
  Rat t = p.trace();
  p.c_[0] -= t;
  p.c_[1] -= t;
  return p;
}

std::string Octonion::str() const {
  std::string out;
  for (int i = 0; i < 8; ++i) {
    if (c_[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += c_[i].str() + "*" + unit_name(i);
  }
  return out.empty() ? "0" : out;
}

QMat left_mult(const Octonion& x) {
  QMat m(8, QVec(8, Rat(0)));
  for (int j = 0; j < 8; ++j) {
    Octonion col = x * Octonion::unit(j);
    for (int i = 0; i < 8; ++i) m[i][j] = col.coord(i);
  }
  return m;
}

QMat right_mult(const Octonion& x) {
  QMat m(8, QVec(8, Rat(0)));
  for (int j = 0; j < 8; ++j) {
    Octonion col = Octonion::unit(j) * x;
    for (int i = 0; i < 8; ++i) m[i][j] = col.coord(i);
  }
  return m;
}

QMat derivation_dxy(const Octonion& x, const Octonion& y) {
  Octonion xy = x * y;
  Octonion yx = y * x;
  Octonion comm = xy - yx;
  QMat l_comm = left_mult(comm);
  QMat r_comm = right_mult(comm);
  QMat lx = left_mult(x);
  QMat ry = right_mult(y);
  QMat m(8, QVec(8, Rat(0)));
  Rat quarter(1, 4);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      Rat lr(0), rl(0);
      for (int k = 0; k < 8; ++k) {
        lr += lx[i][k] * ry[k][j];
        rl += ry[i][k] * lx[k][j];
      }
      m[i][j] = quarter * (l_comm[i][j] - r_comm[i][j] - Rat(3) * (lr - rl));
    }
  return m;
}

Octonion apply_map(const QMat& m, const Octonion& x) {
  Octonion r;
  for (int i = 0; i < 8; ++i) {
    Rat s(0);
    for (int j = 0; j < 8; ++j) s += m[i][j] * x.coord(j);
    r.coord(i) = s;
  }
  return r;
}

RootVector octonion_unit_weight(int i) {
  switch (i) {
    case 0:
    case 1:
      return RootVector();
    case 2: return RootVector::eps_unit(1) - RootVector::eps_unit(2);
    case 3: return RootVector::eps_unit(2) - RootVector::eps_unit(3);
    case 4: return RootVector::eps_unit(3) - RootVector::eps_unit(1);
    case 5: return RootVector::eps_unit(2) - RootVector::eps_unit(1);
    case 6: return RootVector::eps_unit(3) - RootVector::eps_unit(2);
    case 7: return RootVector::eps_unit(1) - RootVector::eps_unit(3);
  }
  throw std::invalid_argument("octonion: unit index");
}

}  // namespace rf
