#include "rootforge/linalg.hpp"

#include <numeric>
#include <stdexcept>

namespace rf {

int rank_of(QMat m) {
  int rank = 0;
  size_t cols = 0;
  for (const auto& row : m) cols = std::max(cols, row.size());
  for (auto& row : m) row.resize(cols, Rat(0));
  for (size_t col = 0; col < cols && rank < static_cast<int>(m.size()); ++col) {
    size_t pivot = m.size();
    for (size_t r = rank; r < m.size(); ++r)
      if (!m[r][col].is_zero()) { pivot = r; break; }
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    Rat inv = m[rank][col].inv();
    for (size_t c = col; c < cols; ++c) m[rank][c] *= inv;
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == static_cast<size_t>(rank) || m[r][col].is_zero()) continue;
      Rat f = m[r][col];
      for (size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

QMat nullspace_of(QMat m, int cols, std::vector<int>* free_cols) {
  if (free_cols) free_cols->clear();
  size_t width = static_cast<size_t>(cols);
  for (auto& row : m) row.resize(width, Rat(0));
  // Gauss-Jordan to reduced row echelon form.
  std::vector<int> pivot_col;
  size_t rank = 0;
  for (size_t col = 0; col < width && rank < m.size(); ++col) {
    size_t pivot = m.size();
    for (size_t r = rank; r < m.size(); ++r)
      if (!m[r][col].is_zero()) { pivot = r; break; }
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    Rat inv = m[rank][col].inv();
    for (size_t c = col; c < width; ++c) m[rank][c] *= inv;
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][col].is_zero()) continue;
      Rat f = m[r][col];
      for (size_t c = col; c < width; ++c) m[r][c] -= f * m[rank][c];
    }
    pivot_col.push_back(static_cast<int>(col));
    ++rank;
  }
  std::vector<bool> is_pivot(width, false);
  for (int pc : pivot_col) is_pivot[pc] = true;
  QMat basis;
  for (size_t f = 0; f < width; ++f) {
    if (is_pivot[f]) continue;
    QVec x(width, Rat(0));
    x[f] = Rat(1);
    for (size_t r = 0; r < rank; ++r) x[pivot_col[r]] = -m[r][f];
    basis.push_back(std::move(x));
    if (free_cols) free_cols->push_back(static_cast<int>(f));
  }
  return basis;
}

SpanSolver::SpanSolver(QMat basis) : basis_(std::move(basis)) {
  size_t cols = 0;
  for (const auto& row : basis_) cols = std::max(cols, row.size());
  for (auto& row : basis_) row.resize(cols, Rat(0));

  for (size_t i = 0; i < basis_.size(); ++i) {
    QVec row = basis_[i];
    QVec tr(basis_.size(), Rat(0));
    tr[i] = Rat(1);
    // Reduce against already-echelonized rows, tracking the combination.
    for (size_t k = 0; k < echelon_.size(); ++k) {
      Rat f = row[pivot_col_[k]];
      if (f.is_zero()) continue;
      for (size_t c = 0; c < cols; ++c) row[c] -= f * echelon_[k][c];
      for (size_t c = 0; c < tr.size(); ++c) tr[c] -= f * trace_[k][c];
    }
    int pc = -1;
    for (size_t c = 0; c < cols; ++c)
      if (!row[c].is_zero()) { pc = static_cast<int>(c); break; }
    if (pc < 0)
      throw std::invalid_argument("SpanSolver: basis rows are dependent");
    Rat inv = row[pc].inv();
    for (auto& x : row) x *= inv;
    for (auto& x : tr) x *= inv;
    echelon_.push_back(std::move(row));
    trace_.push_back(std::move(tr));
    pivot_col_.push_back(pc);
  }
}

std::optional<QVec> SpanSolver::coords(const QVec& v) const {
  size_t cols = echelon_.empty() ? v.size() : echelon_[0].size();
  QVec row = v;
  row.resize(std::max(cols, v.size()), Rat(0));
  if (row.size() > cols) {
    for (size_t c = cols; c < row.size(); ++c)
      if (!row[c].is_zero()) return std::nullopt;
    row.resize(cols);
  }
  QVec out(basis_.size(), Rat(0));
  for (size_t k = 0; k < echelon_.size(); ++k) {
    Rat f = row[pivot_col_[k]];
    if (f.is_zero()) continue;
    for (size_t c = 0; c < cols; ++c) row[c] -= f * echelon_[k][c];
    for (size_t c = 0; c < out.size(); ++c) out[c] += f * trace_[k][c];
  }
  for (const auto& x : row)
    if (!x.is_zero()) return std::nullopt;
  return out;
}

namespace {

long long checked_mul(long long a, long long b) {
  __int128 v = static_cast<__int128>(a) * b;
  if (v > INT64_MAX || v < INT64_MIN)
    throw std::overflow_error("lattice: 64-bit overflow");
  return static_cast<long long>(v);
}

}  // namespace

LatticeMembership::LatticeMembership(const QMat& generators) {
  for (const auto& g : generators) width_ = std::max(width_, g.size());
  // Common denominator so the lattice lives in (1/scale_) * Z^width.
  for (const auto& g : generators)
    for (const auto& x : g) scale_ = std::lcm(scale_, x.den());

  std::vector<std::vector<long long>> rows;
  for (const auto& g : generators) {
    std::vector<long long> row(width_, 0);
    for (size_t c = 0; c < g.size(); ++c)
      row[c] = checked_mul(g[c].num(), scale_ / g[c].den());
    rows.push_back(std::move(row));
  }

  // Column-by-column integer elimination (gcd pivoting): produces an
  // upper-triangular generating set of the same lattice.
  size_t top = 0;
  for (size_t col = 0; col < width_ && top < rows.size(); ++col) {
    // Euclid across all rows below `top` until at most one nonzero remains.
    while (true) {
      size_t nz = rows.size();
      for (size_t r = top; r < rows.size(); ++r)
        if (rows[r][col] != 0 &&
            (nz == rows.size() ||
             std::abs(rows[r][col]) < std::abs(rows[nz][col])))
          nz = r;
      if (nz == rows.size()) break;  // column is all zero below top
      std::swap(rows[top], rows[nz]);
      bool cleared = true;
      for (size_t r = top + 1; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        long long q = rows[r][col] / rows[top][col];
        for (size_t c = col; c < width_; ++c)
          rows[r][c] -= checked_mul(q, rows[top][c]);
        if (rows[r][col] != 0) cleared = false;
      }
      if (cleared) {
        if (rows[top][col] < 0)
          for (size_t c = col; c < width_; ++c) rows[top][c] = -rows[top][c];
        hnf_.push_back(rows[top]);
        pivot_col_.push_back(static_cast<int>(col));
        ++top;
        break;
      }
    }
  }
}

bool LatticeMembership::contains(const QVec& v) const {
  std::vector<long long> row(width_, 0);
  for (size_t c = 0; c < v.size(); ++c) {
    if (c >= width_) {
      if (!v[c].is_zero()) return false;
      continue;
    }
    long long num = v[c].num(), den = v[c].den();
    if (scale_ % den != 0) return false;
    row[c] = checked_mul(num, scale_ / den);
  }
  for (size_t k = 0; k < hnf_.size(); ++k) {
    int pc = pivot_col_[k];
    if (row[pc] == 0) continue;
    if (row[pc] % hnf_[k][pc] != 0) return false;
    long long q = row[pc] / hnf_[k][pc];
    for (size_t c = pc; c < width_; ++c) row[c] -= checked_mul(q, hnf_[k][c]);
  }
  for (long long x : row)
    if (x != 0) return false;
  return true;
}

}  // namespace rf
