#pragma once

/// @file qgroup.hpp
/// @brief Subgroups of the rationals and coset-periodic reflection spaces.
///
/// A subgroup is stored as `multiplier * base`, where base is one of
///   - Z            (cyclic; the multiplier is the generator),
///   - Z_(p)        (localization: denominators coprime to p),
///   - Z[1/q]       (prime inverted: denominators are powers of q).
/// Non-cyclic families additionally carry an optional truncation depth, which
/// restricts membership/enumeration to a finitely generated (hence cyclic)
/// slice while divisibility questions are still answered for the full family.
///
/// Reflection spaces are finite unions of cosets k*G + r with k in
/// {1, 2, 3, 4}; residues are canonicalized through the cyclic quotient
/// G/kG. All reflection-space and triple conditions elsewhere in the project
/// reduce to exact finite arithmetic on these residue indices.

#include <optional>
#include <string>
#include <vector>

#include "rootforge/rational.hpp"

namespace rf {

/// Result of classifying a full (generating) reflection space.
struct FullSpaceClass {
  enum class Tag { equals_group, coset_shift, other } tag;
  Rat shift;            ///< witness s for the 2G+s case
  std::string detail;   ///< human-readable certificate
};

/// Report for the reflection-space axioms on one coset-periodic set.
struct SpaceCheck {
  bool is_reflection_space = false;  ///< E - 2E contained in E
  bool pointed = false;              ///< 0 in E
  bool full = false;                 ///< E generates the ambient group
  std::string witness;               ///< first failing residue pair, if any
};

/// Finitely described subgroup of Q.
class QSubgroup {
 public:
  enum class Kind { cyclic, localization, prime_inverted };

  /// Z itself.
  static QSubgroup integers() { return cyclic(Rat(1)); }
  /// Cyclic subgroup generated by g; g == 0 yields the trivial group, which
  /// only restrict-to-subsystem paths should produce.
  static QSubgroup cyclic(const Rat& generator);
  /// Z_(p): denominators coprime to the prime p.
  static QSubgroup localization(long long p);
  /// Z[1/q]: denominators a power of the prime q.
  static QSubgroup prime_inverted(long long q);
  /// Subgroup generated by a finite list of rationals (reduces to cyclic).
  static QSubgroup from_generators(const std::vector<Rat>& gens);

  Kind kind() const { return kind_; }
  const Rat& multiplier() const { return multiplier_; }
  long long prime() const { return prime_; }
  std::optional<int> depth() const { return depth_; }
  bool is_trivial() const { return multiplier_.is_zero(); }

  /// Windowed variant of a non-cyclic family; no-op on cyclic groups.
  QSubgroup truncated(int depth) const;

  /// Exact membership (for truncated kinds: membership in the truncation).
  bool member(const Rat& q) const;

  /// The subgroup n*G (n != 0).
  QSubgroup scaled(long long n) const;

  /// Whether p*G = G for a prime p.
  bool divisible_by(long long p) const;

  /// |G / p^n G|: p^n when G is not p-divisible, else 1.
  long long quotient_order(long long p, int n) const;

  /// All elements with |x| <= bound, ascending. Requires an enumerable
  /// group (cyclic or truncated).
  std::vector<Rat> window(const Rat& bound) const;
  bool enumerable() const;

  /// Order of the cyclic quotient G/kG (the "effective" period of k).
  long long coset_count(long long k) const;
  /// Index of x's coset in G/kG, in [0, coset_count(k)). x must be a member
  /// of the full family (truncation ignored here).
  long long coset_index(const Rat& x, long long k) const;
  /// Canonical representative of coset index e: e * multiplier.
  Rat coset_rep(long long e) const { return Rat(e) * multiplier_; }

  /// Set-level equality (a truncated family equals the cyclic group it
  /// enumerates; display identity is compared separately).
  bool same_set(const QSubgroup& o) const;

  /// Generator of the cyclic set an enumerable group equals.
  Rat effective_generator() const;

  /// Textual form: Z, Z*g, Zloc(p), Zinv(q), trunc(...,d), or 0.
  std::string str() const;

 private:
  QSubgroup(Kind k, Rat mult, long long prime, std::optional<int> depth);
  void normalize();

  Kind kind_;
  Rat multiplier_;
  long long prime_ = 0;
  std::optional<int> depth_;
};

/// Finite union of cosets of k*G inside G, the shape every shift set of a
/// one-dimensional-nullity system takes.
class ReflectionSpace {
 public:
  /// The whole group G (period 1, residue 0).
  static ReflectionSpace full_group(const QSubgroup& g);
  /// Union of k*G + r over the given representatives. Throws
  /// std::invalid_argument if a representative is not a member of G or two
  /// representatives collide modulo k*G.
  static ReflectionSpace cosets(const QSubgroup& g, long long period,
                                const std::vector<Rat>& reps);
  /// Same, from precomputed residue indices in [0, coset_count(period)).
  static ReflectionSpace from_indices(const QSubgroup& g, long long period,
                                      std::vector<long long> idx);

  const QSubgroup& group() const { return group_; }
  long long period() const { return period_; }
  const std::vector<long long>& residues() const { return residues_; }
  std::vector<Rat> residue_reps() const;

  bool contains(const Rat& x) const;
  std::vector<Rat> window(const Rat& bound) const;

  /// Reflection-space axiom (E - 2E in E) plus pointed/full flags.
  SpaceCheck check() const;

  bool is_pointed() const;
  bool is_full() const;
  /// Whether the set is all of G.
  bool is_whole_group() const;
  /// Whether the set is a subgroup of G.
  bool is_subgroup() const;

  /// The set E - s.
  ReflectionSpace shifted(const Rat& s) const;
  /// The set c * E, living in the group c * G.
  ReflectionSpace scaled_into(const Rat& c, const QSubgroup& target) const;

  /// Residue image at a coarser period M (period() must divide M): the
  /// indices of all cosets of M*G contained in this set.
  std::vector<long long> image_at(long long m) const;

  /// Index |G / <E>| of the subgroup generated by the set.
  long long generated_index() const;

  /// Classification of a full space: G itself, a single coset 2G+s, or
  /// other (with certificate). Precondition: is_full().
  FullSpaceClass classify_full() const;

  bool operator==(const ReflectionSpace& o) const;

  /// Canonical text: "G", "kG", or "kG+{r1,r2,...}".
  std::string str() const;

 private:
  ReflectionSpace(QSubgroup g, long long period, std::vector<long long> idx);

  QSubgroup group_;
  long long period_;
  std::vector<long long> residues_;  // sorted unique coset indices
};

/// Set inclusion X + n*Y subset-of X at residue level (exact).
bool shift_closed(const ReflectionSpace& x, long long n,
                  const ReflectionSpace& y);
/// Set inclusion X + n*Y subset-of Z at residue level (exact).
bool shift_into(const ReflectionSpace& z, const ReflectionSpace& x,
                long long n, const ReflectionSpace& y);
/// Whether X and n*Y intersect (used for the reducedness criterion).
bool scaled_intersects(const ReflectionSpace& x, long long n,
                       const ReflectionSpace& y);

bool is_prime(long long p);

}  // namespace rf
