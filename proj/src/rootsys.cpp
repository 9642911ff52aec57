#include "rootforge/rootsys.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "rootforge/linalg.hpp"

namespace rf {

std::string to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::BC: return "BC";
    case Family::E6: return "E6";
    case Family::E7: return "E7";
    case Family::E8: return "E8";
    case Family::F4: return "F4";
    case Family::G2: return "G2";
  }
  return "?";
}

std::string to_string(LengthClass c) {
  switch (c) {
    case LengthClass::short_root: return "short";
    case LengthClass::long_root: return "long";
    case LengthClass::extra_long_root: return "extra-long";
  }
  return "?";
}

bool RootSystemDesc::valid() const {
  switch (family) {
    case Family::A: return index_size >= 2;
    case Family::B: return index_size >= 1;
    case Family::C: return index_size >= 2;
    case Family::D: return index_size >= 4;
    case Family::BC: return index_size >= 1;
    case Family::E6: return index_size == 8;
    case Family::E7: return index_size == 8;
    case Family::E8: return index_size == 8;
    case Family::F4: return index_size == 4;
    case Family::G2: return index_size == 3;
  }
  return false;
}

int RootSystemDesc::rank() const {
  switch (family) {
    case Family::A: return index_size - 1;
    case Family::B:
    case Family::C:
    case Family::D:
    case Family::BC: return index_size;
    case Family::E6: return 6;
    case Family::E7: return 7;
    case Family::E8: return 8;
    case Family::F4: return 4;
    case Family::G2: return 2;
  }
  return 0;
}

bool RootSystemDesc::simply_laced() const {
  switch (family) {
    case Family::A:
    case Family::D:
    case Family::E6:
    case Family::E7:
    case Family::E8: return true;
    default: return false;
  }
}

int RootSystemDesc::length_ratio() const {
  if (simply_laced()) return 1;
  return family == Family::G2 ? 3 : 2;
}

std::string RootSystemDesc::label() const {
  switch (family) {
    case Family::E6: return "E6";
    case Family::E7: return "E7";
    case Family::E8: return "E8";
    case Family::F4: return "F4";
    case Family::G2: return "G2";
    default: return to_string(family) + std::to_string(index_size);
  }
}

LengthClass RootSystem::class_of(const RootVector& r) const {
  auto it = std::lower_bound(roots.begin(), roots.end(), r);
  if (it == roots.end() || !(*it == r))
    throw std::invalid_argument("root system: vector is not a root");
  return classes[static_cast<size_t>(it - roots.begin())];
}

bool RootSystem::contains(const RootVector& r) const {
  return std::binary_search(roots.begin(), roots.end(), r);
}

std::vector<LengthClass> RootSystem::present_classes() const {
  std::vector<LengthClass> out;
  for (const auto& [cls, n] : class_sizes)
    if (n > 0) out.push_back(cls);
  return out;
}

namespace {

RootVector eps_diff(int i, int j) {
  return RootVector({{i, Rat(1)}, {j, Rat(-1)}}, {});
}

RootVector eps_sum(int i, int j) {
  return RootVector({{i, Rat(1)}, {j, Rat(1)}}, {});
}

void push_with_negative(std::vector<RootVector>& out, const RootVector& r) {
  out.push_back(r);
  out.push_back(-r);
}

std::vector<RootVector> raw_roots(const RootSystemDesc& d) {
  std::vector<RootVector> out;
  const int l = d.index_size;
  switch (d.family) {
    case Family::A:
      for (int i = 1; i <= l; ++i)
        for (int j = 1; j <= l; ++j)
          if (i != j) out.push_back(eps_diff(i, j));
      break;
    case Family::B:
    case Family::C:
    case Family::D:
    case Family::BC:
      for (int i = 1; i <= l; ++i)
        for (int j = i + 1; j <= l; ++j) {
          push_with_negative(out, eps_diff(i, j));
          push_with_negative(out, eps_sum(i, j));
        }
      for (int i = 1; i <= l; ++i) {
        if (d.family == Family::B || d.family == Family::BC)
          push_with_negative(out, RootVector::eps_unit(i));
        if (d.family == Family::C || d.family == Family::BC)
          push_with_negative(out, RootVector::eps_unit(i) * Rat(2));
      }
      break;
    case Family::G2:
      // Short and long roots in the sum-zero plane of Q^3.
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
          if (i != j) out.push_back(eps_diff(i, j));
      for (int i = 1; i <= 3; ++i) {
        int j = (i % 3) + 1, k = (j % 3) + 1;
        push_with_negative(
            out, RootVector({{i, Rat(2)}, {j, Rat(-1)}, {k, Rat(-1)}}, {}));
      }
      break;
    case Family::F4:
      for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) {
          push_with_negative(out, eps_diff(i, j));
          push_with_negative(out, eps_sum(i, j));
        }
      for (int i = 1; i <= 4; ++i)
        push_with_negative(out, RootVector::eps_unit(i));
      for (int mask = 0; mask < 16; ++mask) {
        std::vector<Coord> half;
        for (int i = 1; i <= 4; ++i)
          half.emplace_back(i, Rat(mask & (1 << (i - 1)) ? -1 : 1, 2));
        out.push_back(RootVector(half, {}));
      }
      break;
    case Family::E8:
      for (int i = 1; i <= 8; ++i)
        for (int j = i + 1; j <= 8; ++j) {
          push_with_negative(out, eps_diff(i, j));
          push_with_negative(out, eps_sum(i, j));
        }
      for (int mask = 0; mask < 256; ++mask) {
        if (__builtin_popcount(mask) % 2 != 0) continue;
        std::vector<Coord> half;
        for (int i = 1; i <= 8; ++i)
          half.emplace_back(i, Rat(mask & (1 << (i - 1)) ? -1 : 1, 2));
        out.push_back(RootVector(half, {}));
      }
      break;
    case Family::E7:
      for (int i = 1; i <= 6; ++i)
        for (int j = i + 1; j <= 6; ++j) {
          push_with_negative(out, eps_diff(i, j));
          push_with_negative(out, eps_sum(i, j));
        }
      push_with_negative(out, eps_diff(7, 8));
      for (int mask = 0; mask < 64; ++mask) {
        if (__builtin_popcount(mask) % 2 != 1) continue;
        std::vector<Coord> half = {{7, Rat(1, 2)}, {8, Rat(-1, 2)}};
        for (int i = 1; i <= 6; ++i)
          half.emplace_back(i, Rat(mask & (1 << (i - 1)) ? -1 : 1, 2));
        push_with_negative(out, RootVector(half, {}));
      }
      break;
    case Family::E6:
      for (int i = 1; i <= 5; ++i)
        for (int j = i + 1; j <= 5; ++j) {
          push_with_negative(out, eps_diff(i, j));
          push_with_negative(out, eps_sum(i, j));
        }
      for (int mask = 0; mask < 32; ++mask) {
        if (__builtin_popcount(mask) % 2 != 0) continue;
        std::vector<Coord> half = {{6, Rat(-1, 2)}, {7, Rat(-1, 2)}, {8, Rat(1, 2)}};
        for (int i = 1; i <= 5; ++i)
          half.emplace_back(i, Rat(mask & (1 << (i - 1)) ? -1 : 1, 2));
        push_with_negative(out, RootVector(half, {}));
      }
      break;
  }
  return out;
}

}  // namespace

std::vector<LengthClass> length_partition(
    const std::vector<RootVector>& roots) {
  std::vector<RootVector> sorted = roots;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Rat> norms;
  for (const auto& r : roots) {
    Rat n = norm2(r);
    if (n.is_zero())
      throw std::invalid_argument("length partition: isotropic vector " +
                                  r.str());
    if (std::find(norms.begin(), norms.end(), n) == norms.end())
      norms.push_back(n);
  }
  if (norms.size() > 3)
    throw std::invalid_argument(
        "length partition: more than three distinct lengths");
  Rat min_norm = norms.empty() ? Rat(0) : norms.front();
  for (const Rat& n : norms) min_norm = std::min(min_norm, n);

  std::vector<LengthClass> out;
  out.reserve(roots.size());
  for (const auto& r : roots) {
    if (std::binary_search(sorted.begin(), sorted.end(), r * Rat(1, 2)))
      out.push_back(LengthClass::extra_long_root);
    else if (norm2(r) == min_norm)
      out.push_back(LengthClass::short_root);
    else
      out.push_back(LengthClass::long_root);
  }
  return out;
}

RootSystem generate(const RootSystemDesc& desc) {
  if (!desc.valid())
    throw std::invalid_argument("generate: inadmissible description " +
                                to_string(desc.family) + " with index " +
                                std::to_string(desc.index_size));
  RootSystem sys;
  sys.desc = desc;
  sys.roots = raw_roots(desc);
  std::sort(sys.roots.begin(), sys.roots.end());
  sys.roots.erase(std::unique(sys.roots.begin(), sys.roots.end()),
                  sys.roots.end());
  sys.classes = length_partition(sys.roots);
  for (LengthClass c : sys.classes) sys.class_sizes[c]++;
  return sys;
}

RootSystem reduced_subsystem(const RootSystem& sys) {
  RootSystem out;
  out.desc = sys.desc;
  if (sys.desc.family == Family::BC) out.desc.family = Family::B;
  for (const auto& r : sys.roots)
    if (!sys.contains(r * Rat(1, 2))) out.roots.push_back(r);
  out.classes = length_partition(out.roots);
  for (LengthClass c : out.classes) out.class_sizes[c]++;
  return out;
}

bool is_reduced(const std::vector<RootVector>& roots) {
  std::vector<RootVector> sorted = roots;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& r : roots)
    if (std::binary_search(sorted.begin(), sorted.end(), r * Rat(2)))
      return false;
  return true;
}

namespace {

/// Standard simple system for a generated description, when one is pinned.
std::vector<RootVector> standard_base(const RootSystemDesc& d) {
  std::vector<RootVector> base;
  const int l = d.index_size;
  auto chain = [&base](int upto) {
    for (int i = 1; i < upto; ++i) base.push_back(eps_diff(i, i + 1));
  };
  switch (d.family) {
    case Family::A:
      chain(l);
      break;
    case Family::B:
      chain(l);
      base.push_back(RootVector::eps_unit(l));
      break;
    case Family::C:
      chain(l);
      base.push_back(RootVector::eps_unit(l) * Rat(2));
      break;
    case Family::D:
      chain(l);
      base.push_back(eps_sum(l - 1, l));
      break;
    case Family::G2:
      base.push_back(eps_diff(1, 2));
      base.push_back(RootVector({{1, Rat(-2)}, {2, Rat(1)}, {3, Rat(1)}}, {}));
      break;
    case Family::F4:
      base.push_back(eps_diff(2, 3));
      base.push_back(eps_diff(3, 4));
      base.push_back(RootVector::eps_unit(4));
      base.push_back(RootVector(
          {{1, Rat(1, 2)}, {2, Rat(-1, 2)}, {3, Rat(-1, 2)}, {4, Rat(-1, 2)}},
          {}));
      break;
    case Family::E6:
    case Family::E7:
    case Family::E8: {
      int n = d.family == Family::E6 ? 6 : d.family == Family::E7 ? 7 : 8;
      std::vector<Coord> a1 = {{1, Rat(1, 2)}, {8, Rat(1, 2)}};
      for (int i = 2; i <= 7; ++i) a1.emplace_back(i, Rat(-1, 2));
      base.push_back(RootVector(a1, {}));
      base.push_back(eps_sum(1, 2));
      base.push_back(eps_diff(2, 1));
      for (int i = 4; i <= n; ++i) base.push_back(eps_diff(i - 1, i - 2));
      break;
    }
    case Family::BC:
      break;  // nonreduced; handled by the caller
  }
  return base;
}

}  // namespace

RootVector replay_word(const std::vector<RootVector>& base,
                       const std::vector<int>& word) {
  if (word.empty()) throw std::invalid_argument("replay_word: empty word");
  RootVector v = base.at(word.back());
  for (size_t i = word.size() - 1; i-- > 0;)
    v = reflect(v, base.at(word[i]));
  return v;
}

ReflectableBase reflectable_base(const RootSystem& sys) {
  if (!is_reduced(sys.roots))
    throw std::invalid_argument(
        "reflectable base: system is nonreduced; use the reduced subsystem");

  // Prefer the pinned simple system when it is contained in the root set;
  // otherwise pick rank-increasing roots greedily.
  std::vector<RootVector> base = standard_base(sys.desc);
  bool usable = !base.empty();
  for (const auto& b : base)
    if (!sys.contains(b)) { usable = false; break; }
  if (usable) {
    QMat rows;
    for (const auto& b : base) {
      QVec row;
      for (const auto& [i, v] : b.eps()) {
        if (static_cast<size_t>(i) >= row.size()) row.resize(i + 1, Rat(0));
        row[i] = v;
      }
      rows.push_back(std::move(row));
    }
    if (rank_of(rows) != static_cast<int>(base.size())) usable = false;
  }
  if (!usable) {
    base.clear();
    QMat rows;
    for (const auto& r : sys.roots) {
      QVec row;
      for (const auto& [i, v] : r.eps()) {
        if (static_cast<size_t>(i) >= row.size()) row.resize(i + 1, Rat(0));
        row[i] = v;
      }
      rows.push_back(row);
      if (rank_of(rows) == static_cast<int>(rows.size()))
        base.push_back(r);
      else
        rows.pop_back();
    }
  }

  // Breadth-first closure: every discovered root keeps the word that
  // produced it, so membership certificates can be replayed.
  ReflectableBase out;
  out.base = base;
  std::vector<std::vector<int>> words(sys.roots.size());
  auto index_of = [&sys](const RootVector& r) -> long long {
    auto it = std::lower_bound(sys.roots.begin(), sys.roots.end(), r);
    if (it == sys.roots.end() || !(*it == r)) return -1;
    return it - sys.roots.begin();
  };
  std::queue<size_t> frontier;
  for (size_t b = 0; b < base.size(); ++b) {
    long long idx = index_of(base[b]);
    if (idx < 0) throw std::logic_error("reflectable base: base not in system");
    if (words[idx].empty()) {
      words[idx] = {static_cast<int>(b)};
      frontier.push(static_cast<size_t>(idx));
    }
  }
  while (!frontier.empty()) {
    size_t cur = frontier.front();
    frontier.pop();
    for (size_t b = 0; b < base.size(); ++b) {
      RootVector img = reflect(sys.roots[cur], base[b]);
      long long idx = index_of(img);
      if (idx < 0)
        throw std::runtime_error(
            "reflectable base: reflection left the system at " + img.str());
      if (!words[idx].empty()) continue;
      words[idx].reserve(words[cur].size() + 1);
      words[idx].push_back(static_cast<int>(b));
      words[idx].insert(words[idx].end(), words[cur].begin(),
                        words[cur].end());
      frontier.push(static_cast<size_t>(idx));
    }
  }
  for (size_t i = 0; i < sys.roots.size(); ++i)
    if (words[i].empty())
      throw std::runtime_error("reflectable base: root " + sys.roots[i].str() +
                               " unreachable from the candidate base");
  out.words = std::move(words);
  return out;
}

std::vector<AxiomVerdict> verify_finite_axioms(
    const std::vector<RootVector>& roots) {
  std::vector<AxiomVerdict> out;
  std::vector<RootVector> sorted = roots;
  std::sort(sorted.begin(), sorted.end());

  // A1: no zero vector, no isotropic root; span dimension recorded.
  {
    AxiomVerdict v{"A1", true, ""};
    for (const auto& r : roots) {
      if (r.is_zero() || norm2(r).is_zero()) {
        v.passed = false;
        v.witness = "degenerate root " + r.str();
        break;
      }
    }
    if (v.passed) {
      QMat rows;
      for (const auto& r : roots) {
        QVec row;
        for (const auto& [i, val] : r.eps()) {
          if (static_cast<size_t>(i) >= row.size()) row.resize(i + 1, Rat(0));
          row[i] = val;
        }
        rows.push_back(std::move(row));
      }
      v.witness = "span dimension " + std::to_string(rank_of(rows));
    }
    out.push_back(std::move(v));
  }

  // A2: Cartan numbers integral over all ordered pairs.
  {
    AxiomVerdict v{"A2", true, ""};
    for (const auto& a : roots) {
      for (const auto& b : roots) {
        if (norm2(b).is_zero()) continue;  // reported under A1
        if (!cartan_ok(a, b)) {
          v.passed = false;
          v.witness = "pair (" + a.str() + "; " + b.str() + ")";
          break;
        }
      }
      if (!v.passed) break;
    }
    out.push_back(std::move(v));
  }

  // A3: closure under reflections.
  {
    AxiomVerdict v{"A3", true, ""};
    for (const auto& a : roots) {
      if (norm2(a).is_zero()) continue;
      for (const auto& b : roots) {
        if (!cartan_ok(b, a)) continue;  // reported under A2
        if (!std::binary_search(sorted.begin(), sorted.end(), reflect(b, a))) {
          v.passed = false;
          v.witness = "sigma_{" + a.str() + "}(" + b.str() + ") missing";
          break;
        }
      }
      if (!v.passed) break;
    }
    out.push_back(std::move(v));
  }

  // A4: connectedness of the non-orthogonality graph.
  {
    AxiomVerdict v{"A4", true, ""};
    if (!roots.empty()) {
      std::vector<int> comp(roots.size(), -1);
      std::queue<size_t> q;
      comp[0] = 0;
      q.push(0);
      while (!q.empty()) {
        size_t cur = q.front();
        q.pop();
        for (size_t j = 0; j < roots.size(); ++j)
          if (comp[j] < 0 && !form(roots[cur], roots[j]).is_zero()) {
            comp[j] = 0;
            q.push(j);
          }
      }
      for (size_t j = 0; j < roots.size(); ++j)
        if (comp[j] < 0) {
          v.passed = false;
          v.witness = "components split " + roots[0].str() + " from " +
                      roots[j].str();
          break;
        }
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace rf
