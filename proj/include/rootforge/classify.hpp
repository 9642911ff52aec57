#pragma once

/// @file classify.hpp
/// @brief Similarity of triples, isomorphism of windowed systems, invariants,
/// and the complete one-dimensional-shift catalogs (per finite type and the
/// fourteen affine families at a chosen index size).

#include <optional>
#include <string>
#include <vector>

#include "rootforge/lears.hpp"
#include "rootforge/qgroup.hpp"
#include "rootforge/report.hpp"
#include "rootforge/rootsys.hpp"

namespace rf {

/// Certificate that two triples are similar: the δ-line map is
/// multiplication by `scale`, composed with the class shifts.
struct SimilarityWitness {
  Rat scale;                  // nonzero; scale * G1 = G2
  Rat shift_s;                // element of S2
  std::optional<Rat> shift_l; // element of L2, when L is present
  std::string str() const;
};

/// Deterministic isomorphism invariants of a spec.
struct LearsInvariants {
  RootSystemDesc delta_type;
  long long quotient_sl = 1;  // order of <S>/<L>; 1 when trivial or no L
  bool reduced = false;
  QSubgroup::Kind shift_group_tag = QSubgroup::Kind::cyclic;

  bool operator==(const LearsInvariants& o) const;
  std::string str() const;
};

LearsInvariants invariants(const LearsSpec& spec);

/// Complete similarity decision for triples over enumerable groups (cyclic
/// or truncated): searches scale candidates (generator ratios, positive
/// before negative) and residue shifts in deterministic order. Returns the
/// first witness, or nothing when provably non-similar. Throws
/// std::invalid_argument for non-enumerable groups (undefined search space).
std::optional<SimilarityWitness> similar(const QSubgroup& g1, const Triple& t1,
                                         const QSubgroup& g2,
                                         const Triple& t2);

struct IsomorphismResult {
  enum class Verdict { isomorphic, not_isomorphic, undecided } verdict =
      Verdict::undecided;
  std::optional<SimilarityWitness> witness;
  std::string map_description;  // finite-part map plus shift action
  std::string detail;           // reason for the verdict
  Report report;                // decomposition and soundness checks
};

/// Isomorphism test: decompose both windows, compare finite types, decide
/// triple similarity, and (on success) replay the composite map against the
/// window data. "not isomorphic" only on an exact invariant mismatch or an
/// exhausted similarity search; windows too small to decide report
/// undecided.
IsomorphismResult isomorphic(const LearsWindow& w1, const LearsWindow& w2);

/// The complete list of shift triples for one finite type over one group,
/// up to similarity, for systems with a one-dimensional shift space.
std::vector<LearsSpec> enumerate_nulldim1(const RootSystemDesc& desc,
                                          const QSubgroup& group);

/// One affine-catalog row: display label (e.g. "BC3(2)") plus the spec.
struct CatalogEntry {
  std::string label;
  LearsSpec spec;
};

/// The fourteen affine families instantiated at the given index size over
/// the integers (families with higher minimum index are clamped up).
std::vector<CatalogEntry> lars_catalog(int index_size);

}  // namespace rf
