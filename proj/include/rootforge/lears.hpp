#pragma once

/// @file lears.hpp
/// @brief Locally extended affine root systems over rational shift groups:
/// triple validation, window construction, windowed axiom verification, and
/// decomposition of a concrete window back into its classification data.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rootforge/qgroup.hpp"
#include "rootforge/report.hpp"
#include "rootforge/rootsys.hpp"

namespace rf {

/// Shift sets per length class. L is present iff the type has long roots,
/// E iff it has extra-long roots; where present, E ⊂ L ⊂ S.
struct Triple {
  ReflectionSpace S;
  std::optional<ReflectionSpace> L;
  std::optional<ReflectionSpace> E;

  const ReflectionSpace& for_class(LengthClass c) const;
  bool has(LengthClass c) const;
  std::string str() const;
  bool operator==(const Triple& o) const;
};

/// A buildable description: finite type, shift group, triple, and whether
/// the resulting system is claimed reduced (derivable: E misses 2S).
struct LearsSpec {
  RootSystemDesc desc;
  QSubgroup group;
  Triple triple;
  bool reduced_claim = false;

  /// Recomputes reduced_claim from the triple (E ∩ 2S = ∅, or no E).
  void derive_reduced();
  std::string str() const;  // textual form, e.g. "type=BC2 group=Z S=G ..."
};

/// A finite slice of the infinite system: every root α + s·δ with α in the
/// finite type and s in the class's shift set, |s| ≤ bound.
struct LearsWindow {
  LearsSpec spec;
  Rat bound;
  std::vector<RootVector> roots;  // sorted, deduplicated
  int null_dim = 1;

  bool contains(const RootVector& r) const;
};

/// Checks every containment/fullness/pointedness/subgroup demand the type
/// imposes on a triple, exactly at residue level. Report-based: impossible
/// demands become failed items, never exceptions.
Report validate_triple(const RootSystemDesc& desc, const QSubgroup& group,
                       const Triple& triple);

/// Builds the window. Throws std::invalid_argument when the triple does not
/// match the type's length classes or fails validation.
LearsWindow construct(const LearsSpec& spec, const Rat& bound);

/// Product-of-subgroups construction for null dimension > 1: coordinate j
/// contributes shifts from triples[j] over groups[j] on δ_j, independently.
LearsWindow construct_product(const RootSystemDesc& desc,
                              const std::vector<QSubgroup>& groups,
                              const std::vector<Triple>& triples,
                              const Rat& bound);

/// Windowed axiom verification: A1 (anisotropic, spanning), A2 (integral
/// Cartan numbers), A3 (reflection closure; images whose shift leaves the
/// window count as unchecked), A4 (connectedness), S0 (shifts span the
/// δ-space). Pure and deterministic; pair scans may run on several threads.
Report verify_window(const LearsWindow& window);

/// Same checks for a bare root list with an explicit bound.
Report verify_window_roots(const std::vector<RootVector>& roots,
                           const Rat& bound);

/// Result of decomposing a window: recognized finite type, the finite shift
/// set observed per root, and (for null dimension 1 with group metadata) the
/// fitted triple after shift normalization.
struct Decomposition {
  RootSystemDesc desc;
  std::vector<RootVector> delta;               // recognized finite roots
  std::map<RootVector, std::vector<Rat>> shifts;  // dim-1 shifts, base-lifted
  std::map<RootVector, std::vector<RootVector>> shift_parts;  // raw δ-parts
  std::optional<Triple> triple;                // fitted, null dimension 1
  std::optional<Rat> base_shift;               // normalization shift applied
  std::optional<Rat> base_shift_long;          // same, for the long class
  Rat core{0};  // bound inside which the lifted shift data is complete
  Report report;                               // constancy, (S1), (S3) checks
};

/// Decomposes a verified window. base_choice optionally picks the window
/// representative (finite root → full window root) used to lift the base;
/// the result is normalized so 0 lies in every reduced-root shift set.
/// Throws std::invalid_argument when shift sets are not constant on length
/// classes or no base lift exists.
Decomposition decompose(
    const LearsWindow& window,
    const std::optional<std::map<RootVector, RootVector>>& base_choice = {});

/// Restriction to a finite-rank sub-index with chosen shift generators; the
/// result is an EARS window (finitely generated shift group). Throws when
/// the induced subsystem is not irreducible.
LearsWindow restrict_to_ears(const LearsWindow& window,
                             const std::vector<int>& sub_index,
                             const std::vector<Rat>& shift_generators);

/// Verifies, window-exactly, that the group generated by the roots splits
/// as (ε-lattice of the finite type) ⊕ (shift group): every pairwise sum of
/// window roots decomposes uniquely and every window shift is realized.
Report group_decomposition_check(const LearsWindow& window);

}  // namespace rf
