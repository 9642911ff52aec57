#include "rootforge/fiber.hpp"

#include <map>
#include <stdexcept>

namespace rf {

std::string to_string(FiberKind k) {
  switch (k) {
    case FiberKind::special_linear: return "sl";
    case FiberKind::odd_orthogonal: return "o-odd";
    case FiberKind::odd_symmetric: return "s";
    case FiberKind::symplectic: return "sp";
    case FiberKind::symp_symmetric: return "s-minus";
    case FiberKind::even_orthogonal: return "o-even";
    case FiberKind::natural_vector: return "V";
    case FiberKind::octonion_derivations: return "der";
    case FiberKind::octonion_traceless: return "oct0";
  }
  return "?";
}

namespace {

int defining_size(FiberKind kind, int index_size) {
  switch (kind) {
    case FiberKind::special_linear: return index_size;
    case FiberKind::odd_orthogonal:
    case FiberKind::odd_symmetric:
    case FiberKind::natural_vector: return 2 * index_size + 1;
    case FiberKind::symplectic:
    case FiberKind::symp_symmetric:
    case FiberKind::even_orthogonal: return 2 * index_size;
    case FiberKind::octonion_derivations:
    case FiberKind::octonion_traceless: return 8;
  }
  return 0;
}

bool is_matrix_kind(FiberKind kind) {
  switch (kind) {
    case FiberKind::special_linear:
    case FiberKind::odd_orthogonal:
    case FiberKind::odd_symmetric:
    case FiberKind::symplectic:
    case FiberKind::symp_symmetric:
    case FiberKind::even_orthogonal:
    case FiberKind::octonion_derivations: return true;
    default: return false;
  }
}

void check_size(FiberKind kind, int index_size) {
  switch (kind) {
    case FiberKind::special_linear:
      if (index_size < 2)
        throw std::invalid_argument("fiber: sl needs index size >= 2");
      break;
    case FiberKind::octonion_derivations:
    case FiberKind::octonion_traceless:
      if (index_size != 3)
        throw std::invalid_argument(
            "fiber: octonion kinds use the fixed three-coordinate index");
      break;
    default:
      if (index_size < 1)
        throw std::invalid_argument("fiber: index size must be positive");
      break;
  }
}

}  // namespace

FiberBasis::FiberBasis(FiberKind kind, int index_size, int flat_length,
                       std::vector<FiberElement> elems)
    : kind_(kind),
      index_size_(index_size),
      flat_length_(flat_length),
      matrix_size_(is_matrix_kind(kind) ? defining_size(kind, index_size) : 0),
      elements_(std::move(elems)),
      solver_([&] {
        QMat rows;
        for (const auto& e : elements_) rows.push_back(e.flat);
        return rows;
      }()) {}

QVec FiberBasis::coords(const QVec& flat) const {
  auto c = solver_.coords(flat);
  if (!c)
    throw std::invalid_argument("fiber: vector outside the " +
                                to_string(kind_) + " span");
  return *c;
}

QVec FiberBasis::assemble(const QVec& coefficients) const {
  if (coefficients.size() != elements_.size())
    throw std::invalid_argument("fiber: coefficient count mismatch");
  QVec out(static_cast<size_t>(flat_length_), Rat(0));
  for (size_t i = 0; i < coefficients.size(); ++i) {
    if (coefficients[i].is_zero()) continue;
    for (int c = 0; c < flat_length_; ++c)
      out[c] += coefficients[i] * elements_[i].flat[c];
  }
  return out;
}

QMat odd_form_matrix(int index_size) {
  const int n = 2 * index_size + 1;
  QMat s(n, QVec(n, Rat(0)));
  for (int i = 0; i < index_size; ++i) {
    s[i][index_size + i] = Rat(1);
    s[index_size + i][i] = Rat(1);
  }
  s[n - 1][n - 1] = Rat(1);
  return s;
}

QMat symplectic_form_matrix(int index_size) {
  const int n = 2 * index_size;
  QMat s(n, QVec(n, Rat(0)));
  for (int i = 0; i < index_size; ++i) {
    s[i][index_size + i] = Rat(1);
    s[index_size + i][i] = Rat(-1);
  }
  return s;
}

QMat even_form_matrix(int index_size) {
  const int n = 2 * index_size;
  QMat s(n, QVec(n, Rat(0)));
  for (int i = 0; i < index_size; ++i) {
    s[i][index_size + i] = Rat(1);
    s[index_size + i][i] = Rat(1);
  }
  return s;
}

RootVector position_weight(FiberKind kind, int index_size, int p) {
  const int n = defining_size(kind, index_size);
  if (p < 0 || p >= n)
    throw std::invalid_argument("fiber: position out of range");
  switch (kind) {
    case FiberKind::special_linear:
      return RootVector::eps_unit(p + 1);
    case FiberKind::octonion_derivations:
    case FiberKind::octonion_traceless:
      throw std::invalid_argument(
          "fiber: octonion kinds use unit weights, not positions");
    default:
      if (p < index_size) return RootVector::eps_unit(p + 1);
      if (p < 2 * index_size) return -RootVector::eps_unit(p - index_size + 1);
      return RootVector();
  }
}

QVec mat_product(int n, const QVec& a, const QVec& b) {
  QVec out(static_cast<size_t>(n) * n, Rat(0));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Rat& f = a[i * n + k];
      if (f.is_zero()) continue;
      for (int j = 0; j < n; ++j) out[i * n + j] += f * b[k * n + j];
    }
  return out;
}

QVec mat_commutator(int n, const QVec& a, const QVec& b) {
  QVec ab = mat_product(n, a, b);
  QVec ba = mat_product(n, b, a);
  for (size_t i = 0; i < ab.size(); ++i) ab[i] -= ba[i];
  return ab;
}

QVec mat_apply(int n, const QVec& m, const QVec& v) {
  QVec out(static_cast<size_t>(n), Rat(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Rat& f = m[i * n + j];
      if (!f.is_zero()) out[i] += f * v[j];
    }
  return out;
}

Rat mat_trace(int n, const QVec& a) {
  Rat t(0);
  for (int i = 0; i < n; ++i) t += a[i * n + i];
  return t;
}

QVec flatten(const QMat& m) {
  QVec out;
  for (const auto& row : m)
    for (const auto& x : row) out.push_back(x);
  return out;
}

QMat unflatten(int n, const QVec& flat) {
  QMat out(n, QVec(n, Rat(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = flat[i * n + j];
  return out;
}

Rat natural_pairing(int index_size, const QVec& u, const QVec& w) {
  const int n = 2 * index_size + 1;
  if (static_cast<int>(u.size()) != n || static_cast<int>(w.size()) != n)
    throw std::invalid_argument("fiber: natural pairing length mismatch");
  Rat out(0);
  for (int i = 0; i < index_size; ++i) {
    out += u[i] * w[index_size + i];
    out += u[index_size + i] * w[i];
  }
  out += u[n - 1] * w[n - 1];
  return out;
}

QVec dvv_flat(int index_size, const QVec& v, const QVec& w) {
  const int n = 2 * index_size + 1;
  if (static_cast<int>(v.size()) != n || static_cast<int>(w.size()) != n)
    throw std::invalid_argument("fiber: module vector length mismatch");
  QMat s = odd_form_matrix(index_size);
  // v (wᵗ s) − w (vᵗ s): rank-two map v″ ↦ (w,v″)v − (v,v″)w.
  QVec ws(static_cast<size_t>(n), Rat(0)), vs(static_cast<size_t>(n), Rat(0));
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < n; ++r) {
      ws[j] += w[r] * s[r][j];
      vs[j] += v[r] * s[r][j];
    }
  QVec out(static_cast<size_t>(n) * n, Rat(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i * n + j] = v[i] * ws[j] - w[i] * vs[j];
  return out;
}

namespace {

/// Builds a constrained matrix fiber by solving form·x + sign·xᵗ·form = 0
/// (plus an optional trace-zero row) inside each weight bucket of matrix
/// positions. Solving bucket-by-bucket keeps every basis vector weight
/// homogeneous; the canonical kernel form makes the output deterministic.
FiberBasis build_constrained(FiberKind kind, int index_size, const QMat& form,
                             int sign, bool traceless) {
  const int n = defining_size(kind, index_size);
  const int vars = n * n;

  std::vector<RootVector> wt(static_cast<size_t>(n));
  for (int p = 0; p < n; ++p) wt[p] = position_weight(kind, index_size, p);

  std::vector<RootVector> var_weight(static_cast<size_t>(vars));
  std::vector<RootVector> bucket_weight;
  std::vector<std::vector<int>> bucket_vars;
  std::map<RootVector, int> bucket_index;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      int v = p * n + q;
      var_weight[v] = wt[p] - wt[q];
      auto [it, fresh] = bucket_index.try_emplace(
          var_weight[v], static_cast<int>(bucket_weight.size()));
      if (fresh) {
        bucket_weight.push_back(var_weight[v]);
        bucket_vars.emplace_back();
      }
      bucket_vars[it->second].push_back(v);
    }

  // Constraint rows over all n² variables.
  QMat rows;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      QVec row(static_cast<size_t>(vars), Rat(0));
      for (int r = 0; r < n; ++r) {
        if (!form[a][r].is_zero()) row[r * n + b] += form[a][r];
        if (!form[r][b].is_zero()) row[r * n + a] += Rat(sign) * form[r][b];
      }
      bool nonzero = false;
      for (const auto& x : row)
        if (!x.is_zero()) { nonzero = true; break; }
      if (nonzero) rows.push_back(std::move(row));
    }
  if (traceless) {
    QVec row(static_cast<size_t>(vars), Rat(0));
    for (int p = 0; p < n; ++p) row[p * n + p] = Rat(1);
    rows.push_back(std::move(row));
  }

  // Assign each row to the single bucket carrying its support.
  std::vector<std::vector<int>> bucket_rows(bucket_weight.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    int bucket = -1;
    for (int v = 0; v < vars; ++v) {
      if (rows[r][v].is_zero()) continue;
      int b = bucket_index.at(var_weight[v]);
      if (bucket < 0) bucket = b;
      if (b != bucket)
        throw std::logic_error("fiber: constraint row mixes weights");
    }
    bucket_rows[static_cast<size_t>(bucket)].push_back(static_cast<int>(r));
  }

  std::vector<FiberElement> elems;
  for (size_t b = 0; b < bucket_weight.size(); ++b) {
    const auto& cols = bucket_vars[b];
    QMat sub;
    for (int r : bucket_rows[b]) {
      QVec row;
      row.reserve(cols.size());
      for (int v : cols) row.push_back(rows[r][v]);
      sub.push_back(std::move(row));
    }
    std::vector<int> free_cols;
    QMat kernel = nullspace_of(sub, static_cast<int>(cols.size()), &free_cols);
    for (size_t k = 0; k < kernel.size(); ++k) {
      QVec flat(static_cast<size_t>(vars), Rat(0));
      for (size_t c = 0; c < cols.size(); ++c) flat[cols[c]] = kernel[k][c];
      int anchor = cols[free_cols[k]];
      int p = anchor / n, q = anchor % n;
      std::string name =
          p == q ? "H[" + std::to_string(p + 1) + "]"
                 : "M[" + std::to_string(p + 1) + "," +
                       std::to_string(q + 1) + "]";
      elems.push_back({std::move(name), std::move(flat), bucket_weight[b]});
    }
  }
  return FiberBasis(kind, index_size, vars, std::move(elems));
}

FiberBasis build_special_linear(int index_size) {
  const int n = index_size;
  std::vector<FiberElement> elems;
  for (int i = 0; i + 1 < n; ++i) {
    QVec flat(static_cast<size_t>(n) * n, Rat(0));
    flat[i * n + i] = Rat(1);
    flat[(i + 1) * n + (i + 1)] = Rat(-1);
    elems.push_back(
        {"H[" + std::to_string(i + 1) + "]", std::move(flat), RootVector()});
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      QVec flat(static_cast<size_t>(n) * n, Rat(0));
      flat[i * n + j] = Rat(1);
      elems.push_back(
          {"E[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]",
           std::move(flat),
           RootVector::eps_unit(i + 1) - RootVector::eps_unit(j + 1)});
    }
  return FiberBasis(FiberKind::special_linear, index_size, n * n,
                    std::move(elems));
}

FiberBasis build_natural_vector(int index_size) {
  const int n = 2 * index_size + 1;
  std::vector<FiberElement> elems;
  for (int p = 0; p < n; ++p) {
    QVec flat(static_cast<size_t>(n), Rat(0));
    flat[p] = Rat(1);
    elems.push_back({"v[" + std::to_string(p + 1) + "]", std::move(flat),
                     position_weight(FiberKind::natural_vector, index_size,
                                     p)});
  }
  return FiberBasis(FiberKind::natural_vector, index_size, n,
                    std::move(elems));
}

std::vector<std::pair<std::string, Octonion>> traceless_units() {
  std::vector<std::pair<std::string, Octonion>> out;
  out.emplace_back("e1-e2", Octonion::unit(0) - Octonion::unit(1));
  for (int i = 2; i < 8; ++i)
    out.emplace_back(Octonion::unit_name(i), Octonion::unit(i));
  return out;
}

RootVector traceless_unit_weight(int i) {
  // Index into traceless_units(): 0 is e1−e2 (weight 0), then units 2..7.
  return i == 0 ? RootVector() : octonion_unit_weight(i + 1);
}

FiberBasis build_octonion_derivations() {
  auto units = traceless_units();
  std::vector<FiberElement> elems;
  std::map<RootVector, QMat> accepted;
  for (size_t i = 0; i < units.size(); ++i)
    for (size_t j = i + 1; j < units.size(); ++j) {
      QMat d = derivation_dxy(units[i].second, units[j].second);
      QVec flat = flatten(d);
      bool nonzero = false;
      for (const auto& x : flat)
        if (!x.is_zero()) { nonzero = true; break; }
      if (!nonzero) continue;
      RootVector w = traceless_unit_weight(static_cast<int>(i)) +
                     traceless_unit_weight(static_cast<int>(j));
      // The map must be weight homogeneous: entry (p,q) moves unit q to
      // unit p, a shift by wt(p) − wt(q).
      for (int p = 0; p < 8; ++p)
        for (int q = 0; q < 8; ++q)
          if (!d[p][q].is_zero() &&
              !(octonion_unit_weight(p) - octonion_unit_weight(q) == w))
            throw std::logic_error("fiber: inhomogeneous octonion derivation");
      QMat& acc = accepted[w];
      QMat trial = acc;
      trial.push_back(flat);
      if (rank_of(trial) != static_cast<int>(acc.size()) + 1) continue;
      acc.push_back(flat);
      elems.push_back({"D[" + units[i].first + "," + units[j].first + "]",
                       std::move(flat), w});
    }
  if (elems.size() != 14)
    throw std::logic_error("fiber: octonion derivation span is not 14-dim");
  return FiberBasis(FiberKind::octonion_derivations, 3, 64, std::move(elems));
}

FiberBasis build_octonion_traceless() {
  auto units = traceless_units();
  std::vector<FiberElement> elems;
  for (size_t i = 0; i < units.size(); ++i) {
    QVec flat;
    for (int c = 0; c < 8; ++c) flat.push_back(units[i].second.coord(c));
    elems.push_back({units[i].first, std::move(flat),
                     traceless_unit_weight(static_cast<int>(i))});
  }
  return FiberBasis(FiberKind::octonion_traceless, 3, 8, std::move(elems));
}

}  // namespace

FiberBasis build_fiber(FiberKind kind, int index_size) {
  check_size(kind, index_size);
  switch (kind) {
    case FiberKind::special_linear:
      return build_special_linear(index_size);
    case FiberKind::odd_orthogonal:
      return build_constrained(kind, index_size, odd_form_matrix(index_size),
                               +1, false);
    case FiberKind::odd_symmetric:
      return build_constrained(kind, index_size, odd_form_matrix(index_size),
                               -1, true);
    case FiberKind::symplectic:
      return build_constrained(kind, index_size,
                               symplectic_form_matrix(index_size), +1, false);
    case FiberKind::symp_symmetric:
      return build_constrained(kind, index_size,
                               symplectic_form_matrix(index_size), -1, true);
    case FiberKind::even_orthogonal:
      return build_constrained(kind, index_size, even_form_matrix(index_size),
                               +1, false);
    case FiberKind::natural_vector:
      return build_natural_vector(index_size);
    case FiberKind::octonion_derivations:
      return build_octonion_derivations();
    case FiberKind::octonion_traceless:
      return build_octonion_traceless();
  }
  throw std::invalid_argument("fiber: unknown kind");
}

Rat fiber_pairing(const FiberBasis& fb, const QVec& a, const QVec& b) {
  switch (fb.kind()) {
    case FiberKind::natural_vector:
      return natural_pairing(fb.index_size(), a, b);
    case FiberKind::octonion_traceless: {
      std::array<Rat, 8> xa, xb;
      for (int i = 0; i < 8; ++i) {
        xa[i] = a[i];
        xb[i] = b[i];
      }
      return (Octonion(xa) * Octonion(xb)).trace();
    }
    default: {
      const int n = fb.matrix_size();
      Rat out(0);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) out += a[p * n + q] * b[q * n + p];
      return out;
    }
  }
}

}  // namespace rf
