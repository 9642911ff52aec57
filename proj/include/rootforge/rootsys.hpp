#pragma once

/// @file rootsys.hpp
/// @brief Finite root systems in epsilon coordinates.
///
/// Families A, B, C, D, BC are generated for any admissible index size; the
/// exceptional systems E6, E7, E8, F4, G2 come in their standard rational
/// realizations. Throughout the project the index size of a description is
/// the number of epsilon coordinates it touches; for family A this means the
/// classical rank is index_size - 1 (documented in the CLI help as well).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rootforge/rootvec.hpp"

namespace rf {

enum class Family { A, B, C, D, BC, E6, E7, E8, F4, G2 };

/// Length classes; extra_long marks roots that are twice another root.
enum class LengthClass { short_root, long_root, extra_long_root };

std::string to_string(Family f);
std::string to_string(LengthClass c);

/// Finite-type description: family plus index size.
struct RootSystemDesc {
  Family family;
  int index_size = 0;

  /// Admissibility: A >= 2, B >= 1, C >= 2, D >= 4, BC >= 1; exceptional
  /// families carry their fixed index size.
  bool valid() const;
  /// Dimension of the span of the roots.
  int rank() const;
  bool simply_laced() const;
  bool reduced() const { return family != Family::BC; }
  /// Long/short squared-length ratio (2 or 3); 1 when simply laced.
  int length_ratio() const;

  /// Compact label, e.g. "B3", "BC2", "E8". For family A the number is the
  /// index size (classical rank + 1).
  std::string label() const;

  bool operator==(const RootSystemDesc& o) const {
    return family == o.family && index_size == o.index_size;
  }
};

/// A generated system: sorted roots plus the length partition.
struct RootSystem {
  RootSystemDesc desc;
  std::vector<RootVector> roots;                 // sorted, deduplicated
  std::vector<LengthClass> classes;              // parallel to roots
  std::map<LengthClass, int> class_sizes;

  const std::vector<RootVector>& all() const { return roots; }
  LengthClass class_of(const RootVector& r) const;
  bool contains(const RootVector& r) const;
  /// Which length classes occur.
  std::vector<LengthClass> present_classes() const;
};

/// Generates the standard realization. Throws std::invalid_argument on an
/// inadmissible description.
RootSystem generate(const RootSystemDesc& desc);

/// Length partition of an arbitrary finite set of anisotropic vectors:
/// short = minimal squared length, extra-long = twice another element,
/// long = the rest. Throws if the set has more than three distinct lengths.
std::vector<LengthClass> length_partition(const std::vector<RootVector>& roots);

/// Reflection words certifying that a basis generates every root.
struct ReflectableBase {
  std::vector<RootVector> base;  // simple system, a vector-space basis
  /// For each root of the system (in the system's order): indices into
  /// `base`; the last entry is the starting base root, earlier entries are
  /// the reflections applied right-to-left.
  std::vector<std::vector<int>> words;
};

/// Finds a reflectable base of a reduced system by breadth-first closure
/// over reflections in a standard (or greedily chosen) simple system.
/// Throws std::invalid_argument when the system is nonreduced (apply to the
/// reduced subsystem first) and std::runtime_error when the greedy candidate
/// fails to close.
ReflectableBase reflectable_base(const RootSystem& sys);

/// Replays a witness word and returns the resulting root.
RootVector replay_word(const std::vector<RootVector>& base,
                       const std::vector<int>& word);

/// The reduced subsystem {a in R : a/2 not in R}.
RootSystem reduced_subsystem(const RootSystem& sys);

/// One axiom verdict for a finite system check.
struct AxiomVerdict {
  std::string axiom;
  bool passed = false;
  std::string witness;  // first counterexample, empty when passed
};

/// Finite-system verification: no zero/isotropic roots and full span (A1),
/// integral Cartan numbers (A2), reflection closure (A3), connectedness
/// under the form (A4). Sparse exact arithmetic throughout.
std::vector<AxiomVerdict> verify_finite_axioms(
    const std::vector<RootVector>& roots);

/// Whether no root's double is present.
bool is_reduced(const std::vector<RootVector>& roots);

}  // namespace rf
