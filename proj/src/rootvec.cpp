#include "rootforge/rootvec.hpp"

#include <algorithm>
#include <stdexcept>

namespace rf {

namespace {

void normalize(std::vector<Coord>& v) {
  std::sort(v.begin(), v.end(),
            [](const Coord& a, const Coord& b) { return a.first < b.first; });
  std::vector<Coord> out;
  out.reserve(v.size());
  for (const Coord& c : v) {
    if (!out.empty() && out.back().first == c.first)
      out.back().second += c.second;
    else
      out.push_back(c);
  }
  std::erase_if(out, [](const Coord& c) { return c.second.is_zero(); });
  v = std::move(out);
}

std::vector<Coord> merge(const std::vector<Coord>& a,
                         const std::vector<Coord>& b, int sign) {
  std::vector<Coord> out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      Coord c = b[j++];
      if (sign < 0) c.second = -c.second;
      if (!c.second.is_zero()) out.push_back(c);
    } else {
      Rat v = sign < 0 ? a[i].second - b[j].second : a[i].second + b[j].second;
      if (!v.is_zero()) out.emplace_back(a[i].first, v);
      ++i, ++j;
    }
  }
  return out;
}

Rat lookup(const std::vector<Coord>& v, int idx) {
  auto it = std::lower_bound(
      v.begin(), v.end(), idx,
      [](const Coord& c, int i) { return c.first < i; });
  return (it != v.end() && it->first == idx) ? it->second : Rat(0);
}

int cmp_coords(const std::vector<Coord>& a, const std::vector<Coord>& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (a[i].first != b[i].first) return a[i].first < b[i].first ? -1 : 1;
    if (a[i].second != b[i].second) return a[i].second < b[i].second ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

}  // namespace

RootVector::RootVector(std::vector<Coord> eps, std::vector<Coord> nulls)
    : eps_(std::move(eps)), nulls_(std::move(nulls)) {
  normalize(eps_);
  normalize(nulls_);
}

Rat RootVector::eps_at(int i) const { return lookup(eps_, i); }
Rat RootVector::null_at(int j) const { return lookup(nulls_, j); }

RootVector RootVector::operator+(const RootVector& o) const {
  RootVector r;
  r.eps_ = merge(eps_, o.eps_, +1);
  r.nulls_ = merge(nulls_, o.nulls_, +1);
  return r;
}

RootVector RootVector::operator-(const RootVector& o) const {
  RootVector r;
  r.eps_ = merge(eps_, o.eps_, -1);
  r.nulls_ = merge(nulls_, o.nulls_, -1);
  return r;
}

RootVector RootVector::operator*(const Rat& c) const {
  if (c.is_zero()) return RootVector();
  RootVector r = *this;
  for (auto& x : r.eps_) x.second *= c;
  for (auto& x : r.nulls_) x.second *= c;
  return r;
}

bool RootVector::operator<(const RootVector& o) const {
  int c = cmp_coords(eps_, o.eps_);
  if (c != 0) return c < 0;
  return cmp_coords(nulls_, o.nulls_) < 0;
}

RootVector RootVector::with_null(int j, const Rat& v) const {
  RootVector r = *this;
  r.nulls_ = merge(r.nulls_, {{j, v}}, +1);
  return r;
}

size_t RootVector::hash() const {
  uint64_t h = 14695981039346656037ull;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (const Coord& c : eps_) {
    mix(static_cast<uint64_t>(c.first));
    mix(c.second.hash());
  }
  mix(0x5eedull);
  for (const Coord& c : nulls_) {
    mix(static_cast<uint64_t>(c.first));
    mix(c.second.hash());
  }
  return static_cast<size_t>(h);
}

std::string RootVector::str() const {
  auto block = [](const std::vector<Coord>& v) {
    std::string s = "{";
    bool first = true;
    for (const Coord& c : v) {
      if (!first) s += ",";
      first = false;
      s += std::to_string(c.first) + ":" + c.second.str();
    }
    return s + "}";
  };
  return "eps:" + block(eps_) + " nulls:" + block(nulls_);
}

Rat form(const RootVector& a, const RootVector& b) {
  Rat acc(0);
  size_t i = 0, j = 0;
  while (i < a.eps_.size() && j < b.eps_.size()) {
    if (a.eps_[i].first < b.eps_[j].first) ++i;
    else if (b.eps_[j].first < a.eps_[i].first) ++j;
    else acc += a.eps_[i++].second * b.eps_[j++].second;
  }
  return acc;
}

long long cartan_int(const RootVector& a, const RootVector& b) {
  Rat bb = norm2(b);
  if (bb.is_zero())
    throw std::domain_error("cartan_int: isotropic second argument");
  Rat v = Rat(2) * form(a, b) / bb;
  if (!v.is_integer())
    throw std::domain_error("cartan_int: non-integral value " + v.str());
  return v.num();
}

bool cartan_ok(const RootVector& a, const RootVector& b) {
  Rat bb = norm2(b);
  if (bb.is_zero()) return false;
  return (Rat(2) * form(a, b) / bb).is_integer();
}

RootVector reflect(const RootVector& b, const RootVector& a) {
  Rat aa = norm2(a);
  if (aa.is_zero())
    throw std::domain_error("reflect: isotropic mirror");
  return b - a * (Rat(2) * form(b, a) / aa);
}

}  // namespace rf
