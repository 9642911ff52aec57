#pragma once

/// @file rational.hpp
/// @brief Exact rational arithmetic on 64-bit reduced fractions.
///
/// Key design decisions:
///  - always stored reduced, denominator strictly positive, zero is 0/1;
///  - every product/sum runs through __int128 and narrows with an explicit
///    range check, so overflow throws instead of wrapping silently;
///  - division by zero and zero denominators throw std::domain_error.
///
/// The whole artifact computes over Q; there is deliberately no floating
/// point anywhere in this header.

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rf {

/// Exact rational number: reduced fraction of two 64-bit integers.
class Rat {
 public:
  constexpr Rat() : num_(0), den_(1) {}
  constexpr Rat(long long n) : num_(n), den_(1) {}
  Rat(long long n, long long d) : num_(n), den_(d) { canonicalize(); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  bool is_negative() const { return num_ < 0; }

  Rat operator-() const { return Rat(unchecked{}, -num_, den_); }

  Rat operator+(const Rat& o) const {
    __int128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
    __int128 d = i128(den_) * o.den_;
    return make(n, d);
  }
  Rat operator-(const Rat& o) const { return *this + (-o); }
  Rat operator*(const Rat& o) const {
    return make(i128(num_) * o.num_, i128(den_) * o.den_);
  }
  Rat operator/(const Rat& o) const {
    if (o.num_ == 0) throw std::domain_error("Rat: division by zero");
    return make(i128(num_) * o.den_, i128(den_) * o.num_);
  }

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  std::strong_ordering operator<=>(const Rat& o) const {
    __int128 lhs = i128(num_) * o.den_;
    __int128 rhs = i128(o.num_) * den_;
    return lhs < rhs ? std::strong_ordering::less
         : lhs > rhs ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
  }

  Rat abs() const { return num_ < 0 ? -*this : *this; }

  /// Reciprocal; throws on zero.
  Rat inv() const {
    if (num_ == 0) throw std::domain_error("Rat: inverse of zero");
    return make(i128(den_), i128(num_));
  }

  /// Integer power (negative exponents allowed for nonzero values).
  Rat pow(long long e) const {
    if (e < 0) return inv().pow(-e);
    Rat acc(1), base = *this;
    for (; e > 0; e >>= 1) {
      if (e & 1) acc *= base;
      if (e > 1) base *= base;
    }
    return acc;
  }

  /// Floor of the rational as an integer.
  long long floor() const {
    long long q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  /// Renders "n" for integers, "n/d" otherwise.
  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) s += "/" + std::to_string(den_);
    return s;
  }

  size_t hash() const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(static_cast<uint64_t>(num_));
    mix(static_cast<uint64_t>(den_));
    return static_cast<size_t>(h);
  }

 private:
  struct unchecked {};
  constexpr Rat(unchecked, long long n, long long d) : num_(n), den_(d) {}

  static __int128 i128(long long v) { return static_cast<__int128>(v); }

  static long long narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN)
      throw std::overflow_error("Rat: 64-bit overflow");
    return static_cast<long long>(v);
  }

  static Rat make(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    return Rat(unchecked{}, narrow(n), narrow(d));
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void canonicalize() {
    if (den_ == 0) throw std::domain_error("Rat: zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
  }

  long long num_;
  long long den_;
};

inline Rat operator*(long long k, const Rat& r) { return Rat(k) * r; }

}  // namespace rf

template <>
struct std::hash<rf::Rat> {
  size_t operator()(const rf::Rat& r) const { return r.hash(); }
};
