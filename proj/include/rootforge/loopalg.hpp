#pragma once

/// @file loopalg.hpp
/// @brief Graded loop algebras over exact rationals: a fiber Lie algebra
/// tensored with a twisted group algebra of a rational subgroup, possibly
/// with twisted sectors on cosets of a subgroup, plus the central extension,
/// the degree derivation, and the root-space decomposition that reproduces
/// the classified null-dimension-1 systems.
///
/// Everything is windowed: a degree bound cuts the infinite algebra to a
/// finite basis, brackets whose degree leaves the window are dropped and
/// counted, and all checks quantify exactly over what the window contains.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rootforge/fiber.hpp"
#include "rootforge/lears.hpp"
#include "rootforge/qgroup.hpp"
#include "rootforge/report.hpp"
#include "rootforge/rootsys.hpp"
#include "rootforge/rootvec.hpp"

namespace rf {

/// Which loop construction to build. Untwisted labels tensor one fiber with
/// the full group algebra; twisted labels split the degrees into cosets of
/// a subgroup of index 2 or 3 and place a different fiber on each coset.
struct LoopLabel {
  Family family = Family::A;
  int twist = 1;  // 1 untwisted; 2 or 3 for the coset constructions

  /// Tokens: "A", "B", "C", "D", "G2(1)" untwisted; "B(2)", "C(2)", "BC",
  /// "G2(3)" twisted (BC is the two-sector construction; its customary
  /// label carries no superscript).
  std::string str() const;
  static LoopLabel parse(const std::string& token);
  bool operator==(const LoopLabel& o) const {
    return family == o.family && twist == o.twist;
  }
};

/// Symmetric 2-cocycle on the degree group: the multiplication twist
/// t^g t^h = τ(g,h) t^{g+h}. Three flavors: the constant-1 cocycle, the
/// power family τ(g,h) = λ^{g·h} (defined where g·h is an integer), and an
/// explicit finite table.
class Cocycle {
 public:
  static Cocycle trivial();
  static Cocycle power(const Rat& lambda);
  static Cocycle table(std::map<std::pair<Rat, Rat>, Rat> entries);

  /// Value τ(g,h). Throws std::domain_error for a power cocycle at a
  /// non-integer product and std::out_of_range for a missing table entry.
  Rat value(const Rat& g, const Rat& h) const;

  /// Whether the value is defined at (g,h).
  bool defined(const Rat& g, const Rat& h) const;

  /// Symmetry, nonvanishing, and the cocycle law
  /// τ(g+h,k)τ(g,h) = τ(g,h+k)τ(h,k) over the given degree list; pairs or
  /// triples the table does not cover count as unchecked.
  CheckItem validate(const std::vector<Rat>& degrees) const;

  std::string str() const;

 private:
  enum class Mode { trivial, power, table };
  Mode mode_ = Mode::trivial;
  Rat lambda_{1};
  std::map<std::pair<Rat, Rat>, Rat> table_;
};

/// One direct summand: a fiber placed on one coset of the degree subgroup.
struct LoopPart {
  FiberBasis fiber;
  int sector = 0;       // coset index: degrees lie in sector·g₁ + G′
  Rat sector_shift{0};  // sector·g₁
  std::string name;     // e.g. "o-odd@0", "V@1"
};

/// A basis symbol of the windowed algebra: fiber element ⊗ t^degree, the
/// central element c, or the degree derivation d.
struct LoopSymbol {
  enum class Role { fiber, center, derivation };
  Role role = Role::fiber;
  int part = -1;    // index into parts (fiber symbols)
  int member = -1;  // index into the part's fiber basis
  RootVector weight;
  Rat degree{0};
  std::string name;  // "E[1,2]@t^-1", "c", "d"
};

/// Sparse bracket value: list of (symbol index, coefficient).
using BracketTerms = std::vector<std::pair<int, Rat>>;

/// A degree-windowed graded Lie algebra with an explicit basis and sparse
/// structure constants. The stored table covers fiber-symbol pairs i < j
/// whose degree sum stays inside the window; everything else (order, signs,
/// c, d) is derived in bracket().
struct GradedLieWindow {
  LoopLabel label;
  int index_size = 0;
  QSubgroup group;  // degree group G
  QSubgroup sub;    // degree subgroup G′ (equals G when untwisted)
  Cocycle tau;
  Rat bound{0};

  std::vector<LoopPart> parts;
  std::vector<LoopSymbol> basis;
  std::map<std::pair<int, int>, BracketTerms> table;
  long long overflow_pairs = 0;  // fiber pairs dropped by the degree window

  bool has_center = false;
  bool has_derivation = false;
  int center_index = -1;
  int derivation_index = -1;
  /// Pairing-block scales fixed by central_extend, as (block name, scale).
  std::vector<std::pair<std::string, Rat>> form_scales;

  Report build_report;

  int dim() const { return static_cast<int>(basis.size()); }

  /// Bracket of two basis symbols; nullopt when the pair overflows the
  /// degree window. Order and antisymmetry are handled here.
  std::optional<BracketTerms> bracket(int i, int j) const;

  /// One-line inventory: label, group data, parts, dimension.
  std::string str() const;
};

/// Builds the windowed loop algebra. Validates the label/index combination
/// (the fiber sizes must exist), the quotient condition for twisted labels
/// (G must not be p-divisible for a p-twist, so that G/pG has order p), and
/// the cocycle on the degree window. Throws std::invalid_argument on any
/// violation; the returned build_report records the cocycle check and the
/// bracket grading audit.
GradedLieWindow build_loop_algebra(const LoopLabel& label, int index_size,
                                   const QSubgroup& group, const Cocycle& tau,
                                   const Rat& bound);

/// Adjoins the central symbol c: every fiber bracket at degree sum zero
/// gains the term (x,y)·τ(g,h)·g·c, where (·,·) is the invariant pairing
/// assembled from the fibers' reference pairings with block scales solved
/// from the invariance equations (first block normalized to 1). The report
/// records the solved scales, form invariance, the antisymmetry of the
/// extension term, and its cocycle compatibility on window triples.
/// Supplying scale_override replaces the solved scales (one value per
/// pairing block) and is verified the same way — a deliberately wrong
/// override makes the invariance check throw, which is the tested error
/// path ("form not invariant", with a witness triple).
GradedLieWindow central_extend(
    const GradedLieWindow& w,
    const std::optional<std::vector<Rat>>& scale_override = std::nullopt);

/// Adjoins the degree derivation d with [d, x⊗t^g] = g·x⊗t^g and [d,c] = 0;
/// requires the center to be present. The report verifies that the span of
/// the weight-0 degree-0 symbols together with c and d is abelian.
GradedLieWindow add_degree_derivation(const GradedLieWindow& w);

/// The set of anisotropic roots of the window relative to the diagonal
/// Cartan plus degree grading: every fiber symbol of nonzero weight
/// contributes weight + degree·δ. Sorted, deduplicated.
std::vector<RootVector> root_decomposition(const GradedLieWindow& w);

/// The classified prediction for this label at this size: the window of the
/// null-dimension-1 spec whose shift sets the construction realizes
/// (full group on every class for untwisted labels; subgroup cosets per the
/// twisted sector layout). Throws std::invalid_argument when the finite
/// type is not admissible at this index size (no prediction below the
/// family's rank threshold).
std::vector<RootVector> predicted_roots(const GradedLieWindow& w);

/// Set-equality check of root_decomposition against predicted_roots;
/// "skip" with a note when no prediction exists at this size.
CheckItem realization_matches(const GradedLieWindow& w);

/// Jacobi identity over all basis triples i < j < k whose four degree sums
/// (three pairwise, one total) stay inside the window; triples touching an
/// out-of-window bracket count as unchecked. Exact, parallelized, with a
/// deterministic witness list.
CheckItem jacobi_exhaustive(const GradedLieWindow& w);

/// Jacobi identity on `samples` seeded pseudo-random triples of sparse
/// rational combinations drawn from symbols of degree ≤ bound/3 (so every
/// needed bracket stays inside the window). Deterministic for a fixed seed.
CheckItem jacobi_sampled(const GradedLieWindow& w, int samples,
                         std::uint64_t seed);

/// Stable text dump of the basis inventory and the sparse bracket table
/// (one `i j k coefficient` line per structure constant).
std::string dump_structure_constants(const GradedLieWindow& w);

/// The twisted group algebra F^τ[G] with the distinguished subgroup G′
/// marking the coefficient ring F^τ[G′]. Elements are finite degree→value
/// maps; products are exact and never truncated.
class TwistedGroupAlgebra {
 public:
  using Elem = std::map<Rat, Rat>;

  TwistedGroupAlgebra(QSubgroup group, QSubgroup sub, Cocycle tau);

  const QSubgroup& group() const { return group_; }
  const QSubgroup& sub() const { return sub_; }

  Elem multiply(const Elem& a, const Elem& b) const;
  Elem scale(const Elem& a, const Rat& c) const;
  Elem add(const Elem& a, const Elem& b) const;
  /// The coefficient-ring projection: keeps exactly the degrees in G′.
  Elem tr(const Elem& a) const;
  static bool is_zero(const Elem& a);
  static std::string str(const Elem& a);

 private:
  QSubgroup group_;
  QSubgroup sub_;
  Cocycle tau_;
};

/// Evaluates the degree-3 trace identity
///   x³ − 3·tr(x)x² + (9/2·tr(x)² − 3/2·tr(x²))x
///     − tr(x³) + 9/2·tr(x²)tr(x) − 9/2·tr(x)³ = 0
/// exactly for an element of a twisted group algebra whose subgroup has
/// index 3. The element algebra is exact, so no window expansion is needed.
CheckItem trace_identity_check(const TwistedGroupAlgebra& algebra,
                               const TwistedGroupAlgebra::Elem& x);

}  // namespace rf
