#include "rootforge/qgroup.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace rf {

namespace {

long long ipow(long long base, int e) {
  long long r = 1;
  while (e-- > 0) {
    __int128 v = static_cast<__int128>(r) * base;
    if (v > INT64_MAX) throw std::overflow_error("qgroup: power overflow");
    r = static_cast<long long>(v);
  }
  return r;
}

/// p-adic valuation of a nonzero rational.
int valuation(const Rat& x, long long p) {
  int v = 0;
  long long n = std::abs(x.num());
  while (n % p == 0) { n /= p; ++v; }
  long long d = x.den();
  while (d % p == 0) { d /= p; --v; }
  return v;
}

long long strip_prime(long long n, long long p) {
  while (n % p == 0) n /= p;
  return n;
}

long long mod_norm(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

long long mod_inverse(long long a, long long m) {
  // extended Euclid; caller guarantees gcd(a, m) == 1
  long long t = 0, new_t = 1, r = m, new_r = mod_norm(a, m);
  while (new_r != 0) {
    long long q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw std::logic_error("qgroup: residue not invertible");
  return mod_norm(t, m);
}

void require_prime(long long p) {
  if (!is_prime(p))
    throw std::invalid_argument("qgroup: " + std::to_string(p) +
                                " is not prime");
}

/// p-free part of lcm(1..depth): the denominator bound of a truncated
/// localization window.
long long pfree_lcm(int depth, long long p) {
  long long l = 1;
  for (int i = 2; i <= depth; ++i) l = std::lcm(l, strip_prime(i, p));
  return l;
}

}  // namespace

bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

QSubgroup::QSubgroup(Kind k, Rat mult, long long prime,
                     std::optional<int> depth)
    : kind_(k), multiplier_(mult), prime_(prime), depth_(depth) {
  normalize();
}

void QSubgroup::normalize() {
  multiplier_ = multiplier_.abs();
  if (multiplier_.is_zero()) {
    kind_ = Kind::cyclic;  // trivial group
    prime_ = 0;
    depth_.reset();
    return;
  }
  switch (kind_) {
    case Kind::cyclic:
      break;
    case Kind::localization:
      // units of Z_(p) are absorbed: only the p-part of the multiplier
      // matters for the set.
      multiplier_ = Rat(prime_).pow(valuation(multiplier_, prime_));
      break;
    case Kind::prime_inverted:
      // powers of q are units of Z[1/q]: keep the q-free part only.
      multiplier_ = multiplier_ * Rat(prime_).pow(-valuation(multiplier_, prime_));
      break;
  }
}

QSubgroup QSubgroup::cyclic(const Rat& generator) {
  return QSubgroup(Kind::cyclic, generator, 0, std::nullopt);
}

QSubgroup QSubgroup::localization(long long p) {
  require_prime(p);
  return QSubgroup(Kind::localization, Rat(1), p, std::nullopt);
}

QSubgroup QSubgroup::prime_inverted(long long q) {
  require_prime(q);
  return QSubgroup(Kind::prime_inverted, Rat(1), q, std::nullopt);
}

QSubgroup QSubgroup::from_generators(const std::vector<Rat>& gens) {
  // gcd(a/b, c/d) = gcd(a*d, c*b) / (b*d); folding pairwise keeps exactness.
  Rat g(0);
  for (const Rat& x : gens) {
    if (x.is_zero()) continue;
    if (g.is_zero()) { g = x.abs(); continue; }
    long long num = std::gcd(g.num() * x.den(), x.num() * g.den());
    g = Rat(num, g.den() * x.den());
  }
  return cyclic(g);
}

QSubgroup QSubgroup::truncated(int depth) const {
  if (depth < 0) throw std::invalid_argument("qgroup: negative depth");
  if (kind_ == Kind::cyclic) return *this;  // already enumerable
  QSubgroup g = *this;
  g.depth_ = depth;
  return g;
}

Rat QSubgroup::effective_generator() const {
  switch (kind_) {
    case Kind::cyclic:
      return multiplier_;
    case Kind::prime_inverted:
      if (!depth_) break;
      return multiplier_ / Rat(ipow(prime_, *depth_));
    case Kind::localization:
      if (!depth_) break;
      return multiplier_ / Rat(pfree_lcm(*depth_, prime_));
  }
  throw std::domain_error("qgroup: " + str() + " is not enumerable");
}

bool QSubgroup::enumerable() const {
  return kind_ == Kind::cyclic || depth_.has_value();
}

bool QSubgroup::member(const Rat& q) const {
  if (is_trivial()) return q.is_zero();
  if (enumerable()) {
    Rat g = effective_generator();
    return (q / g).is_integer();
  }
  Rat y = q / multiplier_;
  switch (kind_) {
    case Kind::localization:
      return y.den() % prime_ != 0;
    case Kind::prime_inverted:
      return strip_prime(y.den(), prime_) == 1;
    case Kind::cyclic:
      break;
  }
  return y.is_integer();
}

QSubgroup QSubgroup::scaled(long long n) const {
  if (n == 0) throw std::invalid_argument("qgroup: scale by zero");
  QSubgroup g = *this;
  if (g.is_trivial()) return g;
  switch (kind_) {
    case Kind::cyclic:
      g.multiplier_ = (Rat(n) * multiplier_).abs();
      break;
    case Kind::localization:
      // n * Z_(p) = p^{v_p(n)} * Z_(p)
      g.multiplier_ = multiplier_ * Rat(ipow(prime_, valuation(Rat(n), prime_)));
      break;
    case Kind::prime_inverted:
      // powers of q are units of Z[1/q]
      g.multiplier_ = (multiplier_ * Rat(strip_prime(std::abs(n), prime_)));
      break;
  }
  return g;
}

bool QSubgroup::divisible_by(long long p) const {
  require_prime(p);
  if (is_trivial()) return true;
  bool decision;
  switch (kind_) {
    case Kind::cyclic: decision = false; break;
    case Kind::localization: decision = (p != prime_); break;
    case Kind::prime_inverted: decision = (p == prime_); break;
    default: decision = false; break;
  }
  if (depth_) {
    // Windowed certificate on the base family: division by p keeps (or, on a
    // negative decision, must eventually leave) the family.
    QSubgroup base = *this;
    base.depth_.reset();
    Rat probe = multiplier_ / Rat(p);
    if (base.member(probe) != decision)
      throw std::logic_error("qgroup: divisibility certificate mismatch");
  }
  return decision;
}

long long QSubgroup::quotient_order(long long p, int n) const {
  require_prime(p);
  if (n < 0) throw std::invalid_argument("qgroup: negative exponent");
  return divisible_by(p) ? 1 : ipow(p, n);
}

std::vector<Rat> QSubgroup::window(const Rat& bound) const {
  if (bound.is_negative())
    throw std::invalid_argument("qgroup: negative window bound");
  if (is_trivial()) return {Rat(0)};
  Rat g = effective_generator();  // throws for non-enumerable groups
  long long steps = (bound / g).floor();
  std::vector<Rat> out;
  out.reserve(2 * steps + 1);
  for (long long k = -steps; k <= steps; ++k) out.push_back(Rat(k) * g);
  return out;
}

long long QSubgroup::coset_count(long long k) const {
  if (k <= 0) throw std::invalid_argument("qgroup: period must be positive");
  if (is_trivial()) return 1;
  long long q = 1, rest = k;
  for (long long p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    int v = 0;
    while (rest % p == 0) { rest /= p; ++v; }
    if (!divisible_by(p)) q *= ipow(p, v);
  }
  if (rest > 1 && !divisible_by(rest)) q *= rest;
  return q;
}

long long QSubgroup::coset_index(const Rat& x, long long k) const {
  long long q = coset_count(k);
  if (q == 1) return 0;
  Rat y = x / multiplier_;
  // y must belong to the base family; its denominator is then invertible
  // modulo q by construction of coset_count.
  if (std::gcd(y.den(), q) != 1)
    throw std::invalid_argument("qgroup: " + x.str() + " is not in " + str());
  long long a = mod_norm(y.num() % q, q);
  return a * mod_inverse(y.den() % q, q) % q;
}

bool QSubgroup::same_set(const QSubgroup& o) const {
  if (enumerable() != o.enumerable()) return false;
  if (enumerable()) return effective_generator() == o.effective_generator();
  return kind_ == o.kind_ && prime_ == o.prime_ &&
         multiplier_ == o.multiplier_;
}

std::string QSubgroup::str() const {
  if (is_trivial()) return "0";
  std::string base;
  switch (kind_) {
    case Kind::cyclic:
      base = multiplier_ == Rat(1) ? "Z" : "Z*" + multiplier_.str();
      break;
    case Kind::localization:
      base = "Zloc(" + std::to_string(prime_) + ")";
      if (multiplier_ != Rat(1)) base = multiplier_.str() + "*" + base;
      break;
    case Kind::prime_inverted:
      base = "Zinv(" + std::to_string(prime_) + ")";
      if (multiplier_ != Rat(1)) base = multiplier_.str() + "*" + base;
      break;
  }
  if (depth_) return "trunc(" + base + "," + std::to_string(*depth_) + ")";
  return base;
}

// ---------------------------------------------------------------------------
// ReflectionSpace

ReflectionSpace::ReflectionSpace(QSubgroup g, long long period,
                                 std::vector<long long> idx)
    : group_(std::move(g)), period_(period), residues_(std::move(idx)) {}

ReflectionSpace ReflectionSpace::full_group(const QSubgroup& g) {
  return ReflectionSpace(g, 1, {0});
}

ReflectionSpace ReflectionSpace::cosets(const QSubgroup& g, long long period,
                                        const std::vector<Rat>& reps) {
  if (period < 1 || period > 4)
    throw std::invalid_argument("reflection space: period must be 1..4");
  if (reps.empty())
    throw std::invalid_argument("reflection space: no residues");
  std::vector<long long> idx;
  for (const Rat& r : reps) {
    if (!g.member(r))
      throw std::invalid_argument("reflection space: residue " + r.str() +
                                  " is not in " + g.str());
    long long e = g.coset_index(r, period);
    if (std::find(idx.begin(), idx.end(), e) != idx.end())
      throw std::invalid_argument(
          "reflection space: residues collide modulo " +
          std::to_string(period) + "G (" + r.str() + ")");
    idx.push_back(e);
  }
  std::sort(idx.begin(), idx.end());
  return ReflectionSpace(g, period, std::move(idx));
}

ReflectionSpace ReflectionSpace::from_indices(const QSubgroup& g,
                                              long long period,
                                              std::vector<long long> idx) {
  if (period < 1 || period > 4)
    throw std::invalid_argument("reflection space: period must be 1..4");
  long long q = g.coset_count(period);
  for (auto& e : idx) e = mod_norm(e, q);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.empty()) throw std::invalid_argument("reflection space: empty");
  return ReflectionSpace(g, period, std::move(idx));
}

std::vector<Rat> ReflectionSpace::residue_reps() const {
  std::vector<Rat> out;
  out.reserve(residues_.size());
  for (long long e : residues_) out.push_back(group_.coset_rep(e));
  return out;
}

bool ReflectionSpace::contains(const Rat& x) const {
  if (!group_.member(x)) return false;
  long long e = group_.coset_index(x, period_);
  return std::binary_search(residues_.begin(), residues_.end(), e);
}

std::vector<Rat> ReflectionSpace::window(const Rat& bound) const {
  std::vector<Rat> out;
  for (const Rat& x : group_.window(bound))
    if (std::binary_search(residues_.begin(), residues_.end(),
                           group_.coset_index(x, period_)))
      out.push_back(x);
  return out;
}

SpaceCheck ReflectionSpace::check() const {
  SpaceCheck rep;
  rep.pointed = is_pointed();
  rep.full = is_full();
  long long q = group_.coset_count(period_);
  for (long long a : residues_) {
    for (long long b : residues_) {
      long long e = mod_norm(a - 2 * b, q);
      if (!std::binary_search(residues_.begin(), residues_.end(), e)) {
        rep.is_reflection_space = false;
        rep.witness = "(" + group_.coset_rep(a).str() + ") - 2*(" +
                      group_.coset_rep(b).str() + ") lands in coset " +
                      std::to_string(e) + " of " + std::to_string(period_) +
                      "G, outside the set";
        return rep;
      }
    }
  }
  rep.is_reflection_space = true;
  return rep;
}

bool ReflectionSpace::is_pointed() const {
  return std::binary_search(residues_.begin(), residues_.end(), 0ll);
}

bool ReflectionSpace::is_full() const {
  long long q = group_.coset_count(period_);
  long long g = q;
  for (long long e : residues_) g = std::gcd(g, e);
  return g == 1;
}

bool ReflectionSpace::is_whole_group() const {
  return static_cast<long long>(residues_.size()) ==
         group_.coset_count(period_);
}

bool ReflectionSpace::is_subgroup() const {
  if (!is_pointed()) return false;
  long long q = group_.coset_count(period_);
  for (long long a : residues_)
    for (long long b : residues_)
      if (!std::binary_search(residues_.begin(), residues_.end(),
                              mod_norm(a - b, q)))
        return false;
  return true;
}

ReflectionSpace ReflectionSpace::shifted(const Rat& s) const {
  long long q = group_.coset_count(period_);
  long long off = group_.coset_index(s, period_);
  std::vector<long long> idx;
  idx.reserve(residues_.size());
  for (long long e : residues_) idx.push_back(mod_norm(e - off, q));
  return from_indices(group_, period_, std::move(idx));
}

ReflectionSpace ReflectionSpace::scaled_into(const Rat& c,
                                             const QSubgroup& target) const {
  std::vector<Rat> reps;
  for (long long e : residues_) reps.push_back(c * group_.coset_rep(e));
  return cosets(target, period_, reps);
}

std::vector<long long> ReflectionSpace::image_at(long long m) const {
  if (m % period_ != 0)
    throw std::invalid_argument("reflection space: period must divide image period");
  long long qm = group_.coset_count(m);
  long long qk = group_.coset_count(period_);
  std::vector<long long> out;
  for (long long e = 0; e < qm; ++e)
    if (std::binary_search(residues_.begin(), residues_.end(), e % qk))
      out.push_back(e);
  return out;
}

long long ReflectionSpace::generated_index() const {
  long long g = group_.coset_count(period_);
  for (long long e : residues_) g = std::gcd(g, e);
  return g;
}

FullSpaceClass ReflectionSpace::classify_full() const {
  if (!is_full())
    throw std::domain_error("reflection space: classify_full needs a full set");
  FullSpaceClass out{FullSpaceClass::Tag::other, Rat(0), ""};
  long long m = std::lcm(period_, 2ll);
  long long qm = group_.coset_count(m);
  std::vector<long long> image = image_at(m);
  if (static_cast<long long>(image.size()) == qm) {
    out.tag = FullSpaceClass::Tag::equals_group;
    out.detail = "set covers every coset of " + std::to_string(m) + "G";
    return out;
  }
  // Candidate: a single coset of 2G. Its image at period m is the residues
  // congruent to a fixed shift modulo coset_count(2).
  long long q2 = group_.coset_count(2);
  if (q2 > 1 && !image.empty()) {
    long long s = image.front() % q2;
    std::vector<long long> coset;
    for (long long e = 0; e < qm; ++e)
      if (e % q2 == s) coset.push_back(e);
    if (coset == image) {
      out.tag = FullSpaceClass::Tag::coset_shift;
      out.shift = group_.coset_rep(s);
      out.detail = "set equals 2G + " + out.shift.str();
      return out;
    }
  }
  out.detail = "full set matching neither G nor a 2G-coset";
  return out;
}

bool ReflectionSpace::operator==(const ReflectionSpace& o) const {
  if (!group_.same_set(o.group_)) return false;
  long long m = std::lcm(period_, o.period_);
  return image_at(m) == o.image_at(m);
}

std::string ReflectionSpace::str() const {
  if (is_whole_group()) return "G";
  std::string s = std::to_string(period_) + "G+{";
  bool first = true;
  for (long long e : residues_) {
    if (!first) s += ",";
    first = false;
    s += group_.coset_rep(e).str();
  }
  return s + "}";
}

// ---------------------------------------------------------------------------
// Residue-level set algebra

namespace {

/// Image of n*Y at period m (n may be negative; |n|*period(Y) must divide m).
std::vector<long long> scaled_image(const ReflectionSpace& y, long long n,
                                    long long m) {
  const QSubgroup& g = y.group();
  long long qm = g.coset_count(m);
  long long qs = g.coset_count(std::abs(n) * y.period());
  std::vector<long long> shifted;
  for (long long r : y.residues()) {
    // index of n*rep(r) at period |n|*k_Y
    long long base = mod_norm(n * r, qs);
    shifted.push_back(base);
  }
  std::sort(shifted.begin(), shifted.end());
  shifted.erase(std::unique(shifted.begin(), shifted.end()), shifted.end());
  std::vector<long long> out;
  for (long long e = 0; e < qm; ++e)
    if (std::binary_search(shifted.begin(), shifted.end(), e % qs))
      out.push_back(e);
  return out;
}

}  // namespace

bool shift_into(const ReflectionSpace& z, const ReflectionSpace& x,
                long long n, const ReflectionSpace& y) {
  if (!x.group().same_set(y.group()) || !x.group().same_set(z.group()))
    throw std::invalid_argument("shift_into: mismatched ambient groups");
  long long m = std::lcm(std::lcm(z.period(), x.period()),
                         std::abs(n) * y.period());
  long long qm = x.group().coset_count(m);
  std::vector<long long> ix = x.image_at(m);
  std::vector<long long> iy = scaled_image(y, n, m);
  std::vector<long long> iz = z.image_at(m);
  for (long long a : ix)
    for (long long b : iy)
      if (!std::binary_search(iz.begin(), iz.end(), (a + b) % qm))
        return false;
  return true;
}

bool shift_closed(const ReflectionSpace& x, long long n,
                  const ReflectionSpace& y) {
  return shift_into(x, x, n, y);
}

bool scaled_intersects(const ReflectionSpace& x, long long n,
                       const ReflectionSpace& y) {
  if (!x.group().same_set(y.group()))
    throw std::invalid_argument("scaled_intersects: mismatched ambient groups");
  long long m = std::lcm(x.period(), std::abs(n) * y.period());
  std::vector<long long> ix = x.image_at(m);
  std::vector<long long> iy = scaled_image(y, n, m);
  std::vector<long long> both;
  std::set_intersection(ix.begin(), ix.end(), iy.begin(), iy.end(),
                        std::back_inserter(both));
  return !both.empty();
}

}  // namespace rf
