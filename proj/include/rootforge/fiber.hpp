#pragma once

/// @file fiber.hpp
/// @brief Finite-dimensional fibers for the graded loop constructions:
/// classical matrix algebras cut out by a bilinear form, their symmetric
/// complements, the natural vector module, and the two octonion fibers.
///
/// Every fiber comes with a fixed ordered basis of simultaneous weight
/// vectors for the diagonal Cartan subalgebra. Elements are stored flat:
/// row-major n·n entries for matrix kinds (including the 8×8 octonion
/// derivations), n entries for the vector module, 8 octonion coordinates
/// for the trace-zero octonions.

#include <string>
#include <vector>

#include "rootforge/linalg.hpp"
#include "rootforge/octonion.hpp"
#include "rootforge/rootvec.hpp"

namespace rf {

/// Concrete models the loop constructions draw their fibers from.
/// The classical kinds over index size I (in their defining sizes):
///   special_linear   traceless I×I matrices
///   odd_orthogonal   {x : s x = −xᵗ s} in sl(2I+1), split symmetric s
///   odd_symmetric    {x : s x = xᵗ s} in sl(2I+1)
///   symplectic       {x : s₋ x = −xᵗ s₋} in gl(2I), alternating s₋
///   symp_symmetric   {x : s₋ x = xᵗ s₋} in sl(2I)
///   even_orthogonal  {x : s₊ x = −xᵗ s₊} in gl(2I), split symmetric s₊
///   natural_vector   the column module F^(2I+1) the odd orthogonal acts on
///   octonion_derivations  D_{O,O}, the 14-dimensional derivation algebra
///   octonion_traceless    the 7-dimensional trace-zero octonions
enum class FiberKind {
  special_linear,
  odd_orthogonal,
  odd_symmetric,
  symplectic,
  symp_symmetric,
  even_orthogonal,
  natural_vector,
  octonion_derivations,
  octonion_traceless,
};

std::string to_string(FiberKind k);

/// One basis element: a name, flat coordinates, and its Cartan weight.
struct FiberElement {
  std::string name;
  QVec flat;
  RootVector weight;
};

/// An ordered weight basis of one fiber, with an exact coordinate solver.
class FiberBasis {
 public:
  FiberBasis(FiberKind kind, int index_size, int flat_length,
             std::vector<FiberElement> elems);

  FiberKind kind() const { return kind_; }
  int index_size() const { return index_size_; }
  /// Length of the flat coordinate vectors.
  int flat_length() const { return flat_length_; }
  /// Side length n for matrix kinds (flat_length = n²); 0 otherwise.
  int matrix_size() const { return matrix_size_; }
  int dim() const { return static_cast<int>(elements_.size()); }
  const std::vector<FiberElement>& elements() const { return elements_; }

  /// Coordinates of a flat vector in this basis; throws
  /// std::invalid_argument if it lies outside the span.
  QVec coords(const QVec& flat) const;
  /// Linear combination of the basis by the given coefficients.
  QVec assemble(const QVec& coefficients) const;

 private:
  FiberKind kind_;
  int index_size_;
  int flat_length_;
  int matrix_size_;
  std::vector<FiberElement> elements_;
  SpanSolver solver_;
};

/// Builds the pinned weight basis of a fiber. index_size must be ≥ 2 for
/// special_linear (whose defining size is index_size itself), ≥ 1 for the
/// other classical kinds, and exactly 3 for the octonion kinds (their
/// hexagonal weights live in three coordinates).
FiberBasis build_fiber(FiberKind kind, int index_size);

/// The defining bilinear-form matrices, in the pinned block shapes: s is
/// the split symmetric form on F^(2I+1) pairing position i with I+i and
/// fixing the last; s₋ is the alternating form on F^(2I); s₊ the split
/// symmetric form on F^(2I).
QMat odd_form_matrix(int index_size);
QMat symplectic_form_matrix(int index_size);
QMat even_form_matrix(int index_size);

/// Weight of a matrix row/column position (0-based) under the diagonal
/// Cartan of a classical kind: ε_{p+1} for p < I, −ε_{p−I+1} for
/// I ≤ p < 2I, and 0 for the odd leftover position.
RootVector position_weight(FiberKind kind, int index_size, int p);

/// Flat row-major matrix helpers.
QVec mat_product(int n, const QVec& a, const QVec& b);
QVec mat_commutator(int n, const QVec& a, const QVec& b);
QVec mat_apply(int n, const QVec& m, const QVec& v);
Rat mat_trace(int n, const QVec& a);
QVec flatten(const QMat& m);
QMat unflatten(int n, const QVec& flat);

/// The map v″ ↦ (v′,v″)v − (v,v″)v′ on F^(2I+1) for the split symmetric
/// form (u,w) = uᵗ s w, returned as a flat (2I+1)² matrix. These maps span
/// the odd orthogonal algebra.
QVec dvv_flat(int index_size, const QVec& v, const QVec& w);

/// The bilinear form uᵗ s w on the natural module.
Rat natural_pairing(int index_size, const QVec& u, const QVec& w);

/// The reference invariant pairing of two elements of one fiber:
/// trace form Tr(ab) for matrix kinds (octonion derivations included),
/// uᵗ s w on the natural module, and the normalized trace t(x·y) on the
/// trace-zero octonions.
Rat fiber_pairing(const FiberBasis& fb, const QVec& a, const QVec& b);

}  // namespace rf
