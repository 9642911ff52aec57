#include "rootforge/lears.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rootforge/linalg.hpp"
#include "rootforge/parallel.hpp"
#include "rootforge/textio.hpp"

namespace rf {

// --- Triple / LearsSpec ----------------------------------------------------

const ReflectionSpace& Triple::for_class(LengthClass c) const {
  switch (c) {
    case LengthClass::short_root: return S;
    case LengthClass::long_root:
      if (!L) throw std::invalid_argument("triple: no long-root shift set");
      return *L;
    case LengthClass::extra_long_root:
      if (!E)
        throw std::invalid_argument("triple: no extra-long-root shift set");
      return *E;
  }
  throw std::invalid_argument("triple: unknown length class");
}

bool Triple::has(LengthClass c) const {
  switch (c) {
    case LengthClass::short_root: return true;
    case LengthClass::long_root: return L.has_value();
    case LengthClass::extra_long_root: return E.has_value();
  }
  return false;
}

std::string Triple::str() const {
  std::string out = "S=" + S.str();
  if (L) out += " L=" + L->str();
  if (E) out += " E=" + E->str();
  return out;
}

bool Triple::operator==(const Triple& o) const {
  return S == o.S && L == o.L && E == o.E;
}

void LearsSpec::derive_reduced() {
  reduced_claim = !triple.E || !scaled_intersects(*triple.E, 2, triple.S);
}

std::string LearsSpec::str() const {
  return textio::print_spec_line(*this);
}

bool LearsWindow::contains(const RootVector& r) const {
  return std::binary_search(roots.begin(), roots.end(), r);
}

// --- validate_triple --------------------------------------------------------

namespace {

/// X subset-of Y over the same group, decided on the common residue image.
bool space_subset(const ReflectionSpace& x, const ReflectionSpace& y) {
  long long m = std::lcm(x.period(), y.period());
  auto xi = x.image_at(m);
  auto yi = y.image_at(m);
  return std::includes(yi.begin(), yi.end(), xi.begin(), xi.end());
}

void check_flag(Report& rep, const std::string& axiom, bool pass,
                const std::string& witness) {
  auto& item = rep.add(axiom);
  item.checked_count = 1;
  if (!pass) item.fail(witness);
}

}  // namespace

Report validate_triple(const RootSystemDesc& desc, const QSubgroup& group,
                       const Triple& triple) {
  Report rep;
  rep.set_meta("type", desc.valid() ? desc.label() : "invalid");
  rep.set_meta("group", group.str());
  if (!desc.valid()) {
    rep.add("type admissible")
        .fail("family " + to_string(desc.family) + " with index " +
              std::to_string(desc.index_size));
    return rep;
  }
  check_flag(rep, "type admissible", true, "");

  RootSystem sys = generate(desc);
  bool has_long = sys.class_sizes.count(LengthClass::long_root) > 0;
  bool has_extra = sys.class_sizes.count(LengthClass::extra_long_root) > 0;

  // Every supplied space must live over the stated group.
  {
    auto& item = rep.add("spaces over stated group");
    item.checked_count = 1;
    if (!triple.S.group().same_set(group))
      item.fail("S over " + triple.S.group().str());
    if (triple.L && !triple.L->group().same_set(group))
      item.fail("L over " + triple.L->group().str());
    if (triple.E && !triple.E->group().same_set(group))
      item.fail("E over " + triple.E->group().str());
  }

  // Presence must match the type's length classes.
  check_flag(rep, "L presence", triple.L.has_value() == has_long,
             has_long ? "type has long roots but no L supplied"
                      : "L supplied but type has no long roots");
  check_flag(rep, "E presence", triple.E.has_value() == has_extra,
             has_extra ? "type has extra-long roots but no E supplied"
                       : "E supplied but type has no extra-long roots");

  // S: full pointed reflection space, always.
  SpaceCheck sc = triple.S.check();
  check_flag(rep, "S reflection space", sc.is_reflection_space, sc.witness);
  check_flag(rep, "S pointed", sc.pointed, "0 not in S = " + triple.S.str());
  check_flag(rep, "S full", sc.full, "S does not generate the group");

  const bool demand_s_equals_g =
      (desc.family == Family::A && desc.index_size >= 3) ||
      (desc.family == Family::C && desc.index_size > 2) ||
      desc.family == Family::D || desc.family == Family::E6 ||
      desc.family == Family::E7 || desc.family == Family::E8 ||
      desc.family == Family::F4 || desc.family == Family::G2;
  if (demand_s_equals_g)
    check_flag(rep, "S equals G", triple.S.is_whole_group(),
               "S = " + triple.S.str());

  const long long k = desc.length_ratio();

  if (has_long && triple.L) {
    SpaceCheck lc = triple.L->check();
    check_flag(rep, "L reflection space", lc.is_reflection_space, lc.witness);
    check_flag(rep, "L pointed", lc.pointed,
               "0 not in L = " + triple.L->str());
    check_flag(rep, "L within S", space_subset(*triple.L, triple.S),
               "L = " + triple.L->str() + " not inside S = " + triple.S.str());
    check_flag(rep, "L+" + std::to_string(k) + "S within L",
               shift_into(*triple.L, *triple.L, k, triple.S),
               "L = " + triple.L->str());
    check_flag(rep, "S+L within S",
               shift_into(triple.S, triple.S, 1, *triple.L),
               "S = " + triple.S.str());

    const bool demand_l_subgroup =
        (desc.family == Family::B && desc.index_size > 2) ||
        (desc.family == Family::BC && desc.index_size > 2) ||
        desc.family == Family::F4 || desc.family == Family::G2;
    if (demand_l_subgroup)
      check_flag(rep, "L subgroup", triple.L->is_subgroup(),
                 "L = " + triple.L->str());
    if (desc.family == Family::F4 || desc.family == Family::G2) {
      ReflectionSpace kg = ReflectionSpace::from_indices(
          triple.L->group(), k, {0});
      check_flag(rep, std::to_string(k) + "G within L",
                 space_subset(kg, *triple.L), "L = " + triple.L->str());
    }
  }

  if (has_extra && triple.E) {
    SpaceCheck ec = triple.E->check();
    check_flag(rep, "E reflection space", ec.is_reflection_space, ec.witness);
    const ReflectionSpace& outer =
        (has_long && triple.L) ? *triple.L : triple.S;
    check_flag(rep, has_long ? "E within L" : "E within S",
               space_subset(*triple.E, outer),
               "E = " + triple.E->str());
    check_flag(rep, "E+4S within E",
               shift_into(*triple.E, *triple.E, 4, triple.S),
               "E = " + triple.E->str());
    check_flag(rep, "S+E within S",
               shift_into(triple.S, triple.S, 1, *triple.E),
               "S = " + triple.S.str());
    if (has_long && triple.L) {
      check_flag(rep, "E+2L within E",
                 shift_into(*triple.E, *triple.E, 2, *triple.L),
                 "E = " + triple.E->str());
      check_flag(rep, "L+E within L",
                 shift_into(*triple.L, *triple.L, 1, *triple.E),
                 "L = " + triple.L->str());
    }
  }

  bool reduced = !triple.E || !scaled_intersects(*triple.E, 2, triple.S);
  rep.set_meta("reduced", reduced ? "1" : "0");
  return rep;
}

// --- construct ---------------------------------------------------------------

LearsWindow construct(const LearsSpec& spec, const Rat& bound) {
  Report val = validate_triple(spec.desc, spec.group, spec.triple);
  if (!val.ok()) {
    std::string why;
    for (const auto& it : val.items)
      if (it.status == "fail") {
        why = it.axiom + (it.witnesses.empty() ? "" : ": " + it.witnesses[0]);
        break;
      }
    throw std::invalid_argument("construct: invalid triple (" + why + ")");
  }
  if (spec.reduced_claim && *val.get_meta("reduced") == "0")
    throw std::invalid_argument(
        "construct: reduced claim but E meets 2S");
  RootSystem sys = generate(spec.desc);
  LearsWindow w{spec, bound, {}, 1};
  for (size_t i = 0; i < sys.roots.size(); ++i) {
    const ReflectionSpace& space = spec.triple.for_class(sys.classes[i]);
    for (const Rat& s : space.window(bound))
      w.roots.push_back(sys.roots[i].with_null(1, s));
  }
  std::sort(w.roots.begin(), w.roots.end());
  return w;
}

LearsWindow construct_product(const RootSystemDesc& desc,
                              const std::vector<QSubgroup>& groups,
                              const std::vector<Triple>& triples,
                              const Rat& bound) {
  if (groups.empty() || groups.size() != triples.size())
    throw std::invalid_argument(
        "construct_product: need one triple per group");
  for (size_t j = 0; j < groups.size(); ++j) {
    Report val = validate_triple(desc, groups[j], triples[j]);
    if (!val.ok())
      throw std::invalid_argument(
          "construct_product: invalid triple for coordinate " +
          std::to_string(j + 1));
  }
  RootSystem sys = generate(desc);
  LearsWindow w{LearsSpec{desc, groups[0], triples[0], false}, bound, {},
                static_cast<int>(groups.size())};
  for (size_t i = 0; i < sys.roots.size(); ++i) {
    std::vector<RootVector> partial = {sys.roots[i]};
    for (size_t j = 0; j < groups.size(); ++j) {
      std::vector<RootVector> next;
      for (const RootVector& base : partial)
        for (const Rat& s :
             triples[j].for_class(sys.classes[i]).window(bound))
          next.push_back(base.with_null(static_cast<int>(j + 1), s));
      partial = std::move(next);
    }
    for (auto& r : partial) w.roots.push_back(std::move(r));
  }
  std::sort(w.roots.begin(), w.roots.end());
  return w;
}

// --- verify_window -----------------------------------------------------------

namespace {

/// Interned view of a window: distinct ε-parts with Cartan and reflection
/// tables, plus per-ε sorted δ-part lists for O(log) membership.
struct WindowIndex {
  std::vector<RootVector> eps;                  // sorted distinct ε-parts
  std::vector<int> eps_id;                      // per root
  std::vector<RootVector> null_of;              // per root, δ-part
  std::vector<std::vector<Rat>> cartan;         // 2(b,a)/(a,a) by (a,b) id
  std::vector<std::vector<int>> refl;           // id of σ_a(b), -1 if absent
  std::vector<std::vector<RootVector>> nulls_by_eps;  // sorted per ε id

  explicit WindowIndex(const std::vector<RootVector>& roots) {
    for (const auto& r : roots) eps.push_back(r.eps_part());
    std::sort(eps.begin(), eps.end());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
    nulls_by_eps.resize(eps.size());
    for (const auto& r : roots) {
      int id = id_of(r.eps_part());
      eps_id.push_back(id);
      null_of.push_back(r.null_part());
      nulls_by_eps[id].push_back(r.null_part());
    }
    for (auto& v : nulls_by_eps) std::sort(v.begin(), v.end());
    size_t m = eps.size();
    cartan.assign(m, std::vector<Rat>(m, Rat(0)));
    refl.assign(m, std::vector<int>(m, -1));
    for (size_t a = 0; a < m; ++a) {
      Rat na = norm2(eps[a]);
      if (na.is_zero()) continue;
      for (size_t b = 0; b < m; ++b) {
        Rat c = Rat(2) * form(eps[b], eps[a]) / na;
        cartan[a][b] = c;
        refl[a][b] = id_of(eps[b] - eps[a] * c);
      }
    }
  }

  int id_of(const RootVector& e) const {
    auto it = std::lower_bound(eps.begin(), eps.end(), e);
    if (it == eps.end() || !(*it == e)) return -1;
    return static_cast<int>(it - eps.begin());
  }

  bool has(int eps_idx, const RootVector& null_part) const {
    if (eps_idx < 0) return false;
    const auto& v = nulls_by_eps[static_cast<size_t>(eps_idx)];
    return std::binary_search(v.begin(), v.end(), null_part);
  }
};

bool null_within_bound(const RootVector& null_part, const Rat& bound) {
  for (const auto& [j, v] : null_part.nulls())
    if (v.abs() > bound) return false;
  return true;
}

int eps_rank(const std::vector<RootVector>& vectors) {
  QMat rows;
  for (const auto& r : vectors) {
    QVec row;
    for (const auto& [i, v] : r.eps()) {
      if (static_cast<size_t>(i) >= row.size()) row.resize(i + 1, Rat(0));
      row[i] = v;
    }
    rows.push_back(std::move(row));
  }
  return rank_of(rows);
}

int null_rank(const std::vector<RootVector>& vectors) {
  QMat rows;
  for (const auto& r : vectors) {
    QVec row;
    for (const auto& [j, v] : r.nulls()) {
      if (static_cast<size_t>(j) >= row.size()) row.resize(j + 1, Rat(0));
      row[j] = v;
    }
    rows.push_back(std::move(row));
  }
  return rank_of(rows);
}

int full_rank(const std::vector<RootVector>& vectors) {
  // Joint rank with null coordinates placed after a gap; indices stay exact.
  int max_eps = 0;
  for (const auto& r : vectors)
    for (const auto& [i, v] : r.eps()) max_eps = std::max(max_eps, i);
  QMat rows;
  for (const auto& r : vectors) {
    QVec row;
    auto put = [&row](int col, const Rat& v) {
      if (static_cast<size_t>(col) >= row.size()) row.resize(col + 1, Rat(0));
      row[col] = v;
    };
    for (const auto& [i, v] : r.eps()) put(i, v);
    for (const auto& [j, v] : r.nulls()) put(max_eps + 1 + j, v);
    rows.push_back(std::move(row));
  }
  return rank_of(rows);
}

struct PairScanResult {
  long long checked = 0;
  long long unchecked = 0;
  std::vector<std::string> witnesses;  // capped
};

}  // namespace

Report verify_window_roots(const std::vector<RootVector>& roots,
                           const Rat& bound) {
  Report rep;
  rep.set_meta("roots", std::to_string(roots.size()));
  rep.set_meta("bound", bound.str());

  WindowIndex ix(roots);
  rep.set_meta("eps classes", std::to_string(ix.eps.size()));

  std::set<int> null_indices;
  for (const auto& r : roots)
    for (const auto& [j, v] : r.nulls()) null_indices.insert(j);

  // A1: nonzero anisotropic roots; the set spans ε-span ⊕ δ-coordinates.
  {
    auto& item = rep.add("A1");
    item.checked_count = static_cast<long long>(roots.size());
    for (const auto& r : roots) {
      if (r.is_zero()) {
        item.fail("zero vector present");
        break;
      }
      if (norm2(r).is_zero()) {
        item.fail("isotropic root " + r.str());
        break;
      }
    }
    if (item.status == "pass" && !roots.empty()) {
      int ambient = eps_rank(roots) + static_cast<int>(null_indices.size());
      int actual = full_rank(roots);
      if (actual != ambient)
        item.fail("span dimension " + std::to_string(actual) +
                  " below ambient " + std::to_string(ambient));
    }
  }

  // A2: Cartan integrality; the form ignores δ-parts, so distinct ε-part
  // pairs decide all root pairs.
  {
    auto& item = rep.add("A2");
    item.checked_count =
        static_cast<long long>(roots.size()) * roots.size();
    for (size_t a = 0; a < ix.eps.size() && item.status == "pass"; ++a) {
      if (norm2(ix.eps[a]).is_zero()) continue;  // reported under A1
      for (size_t b = 0; b < ix.eps.size(); ++b) {
        if (!ix.cartan[a][b].is_integer()) {
          item.fail("pair (" + ix.eps[b].str() + "; " + ix.eps[a].str() +
                    ") gives " + ix.cartan[a][b].str());
          break;
        }
      }
    }
  }

  // A3: windowed reflection closure over all ordered root pairs.
  {
    auto& item = rep.add("A3");
    const long long n = static_cast<long long>(roots.size());
    auto chunks = chunked_map<PairScanResult>(n, [&](long long lo,
                                                     long long hi) {
      PairScanResult res;
      for (long long ai = lo; ai < hi; ++ai) {
        int a_eps = ix.eps_id[static_cast<size_t>(ai)];
        if (norm2(ix.eps[a_eps]).is_zero()) continue;
        const RootVector& a_null = ix.null_of[static_cast<size_t>(ai)];
        for (long long bi = 0; bi < n; ++bi) {
          int b_eps = ix.eps_id[static_cast<size_t>(bi)];
          const Rat& c = ix.cartan[a_eps][b_eps];
          RootVector img_null =
              ix.null_of[static_cast<size_t>(bi)] - a_null * c;
          if (!null_within_bound(img_null, bound)) {
            ++res.unchecked;
            continue;
          }
          ++res.checked;
          int img_eps = ix.refl[a_eps][b_eps];
          if (!ix.has(img_eps, img_null)) {
            if (res.witnesses.size() < 4)
              res.witnesses.push_back(
                  "sigma_{" + roots[static_cast<size_t>(ai)].str() + "}(" +
                  roots[static_cast<size_t>(bi)].str() + ") missing");
          }
        }
      }
      return res;
    });
    for (const auto& ch : chunks) {
      item.checked_count += ch.checked;
      item.unchecked_count += ch.unchecked;
      for (const auto& w : ch.witnesses)
        if (item.witnesses.size() < 4) item.fail(w);
    }
  }

  // A4: connectedness of the non-orthogonality graph (ε-level suffices:
  // equal ε-parts pair non-orthogonally with themselves).
  {
    auto& item = rep.add("A4");
    item.checked_count = static_cast<long long>(ix.eps.size());
    if (!ix.eps.empty()) {
      std::vector<int> parent(ix.eps.size());
      std::iota(parent.begin(), parent.end(), 0);
      std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      for (size_t a = 0; a < ix.eps.size(); ++a)
        for (size_t b = a + 1; b < ix.eps.size(); ++b)
          if (!form(ix.eps[a], ix.eps[b]).is_zero())
            parent[find(static_cast<int>(a))] = find(static_cast<int>(b));
      int root0 = find(0);
      for (size_t a = 1; a < ix.eps.size(); ++a)
        if (find(static_cast<int>(a)) != root0) {
          item.fail("components split " + ix.eps[0].str() + " from " +
                    ix.eps[a].str());
          break;
        }
    }
  }

  // S0: δ-parts span the δ-coordinates present.
  {
    auto& item = rep.add("S0");
    item.checked_count = static_cast<long long>(null_indices.size());
    int nr = null_rank(roots);
    if (nr != static_cast<int>(null_indices.size()))
      item.fail("shift parts span dimension " + std::to_string(nr) + " of " +
                std::to_string(null_indices.size()));
  }

  return rep;
}

Report verify_window(const LearsWindow& window) {
  Report rep = verify_window_roots(window.roots, window.bound);

  // Disjoint-union integrity against the spec, when reproducible.
  if (window.spec.desc.valid() && window.null_dim == 1) {
    auto& item = rep.add("window integrity");
    try {
      RootSystem sys = generate(window.spec.desc);
      long long expected = 0;
      for (const auto& [cls, cnt] : sys.class_sizes)
        expected +=
            static_cast<long long>(cnt) *
            static_cast<long long>(
                window.spec.triple.for_class(cls).window(window.bound).size());
      item.checked_count = expected;
      if (expected != static_cast<long long>(window.roots.size()))
        item.fail("expected " + std::to_string(expected) + " roots, have " +
                  std::to_string(window.roots.size()));
    } catch (const std::exception& e) {
      item.status = "skip";
      item.witnesses.push_back(e.what());
    }
  }
  return rep;
}

// --- decompose ---------------------------------------------------------------

namespace {

/// Exact-set type recognition after relabeling ε-indices to 1..m.
std::optional<RootSystemDesc> recognize_type(
    const std::vector<RootVector>& delta) {
  std::set<int> idx;
  for (const auto& r : delta)
    for (const auto& [i, v] : r.eps()) idx.insert(i);
  std::map<int, int> relabel;
  int next = 1;
  for (int i : idx) relabel[i] = next++;
  std::vector<RootVector> canon;
  for (const auto& r : delta) {
    std::vector<Coord> eps;
    for (const auto& [i, v] : r.eps()) eps.emplace_back(relabel[i], v);
    canon.push_back(RootVector(eps, {}));
  }
  std::sort(canon.begin(), canon.end());
  int m = static_cast<int>(idx.size());

  std::vector<RootSystemDesc> candidates;
  for (Family f : {Family::A, Family::B, Family::C, Family::D, Family::BC})
    candidates.push_back({f, m});
  if (m == 8) {
    candidates.push_back({Family::E6, 8});
    candidates.push_back({Family::E7, 8});
    candidates.push_back({Family::E8, 8});
  }
  if (m == 4) candidates.push_back({Family::F4, 4});
  if (m == 3) candidates.push_back({Family::G2, 3});
  for (const auto& d : candidates) {
    if (!d.valid()) continue;
    RootSystem sys = generate(d);
    if (sys.roots == canon) return d;
  }
  return std::nullopt;
}

std::string join_rats(const std::vector<Rat>& v, size_t cap = 12) {
  std::string out = "{";
  for (size_t i = 0; i < v.size() && i < cap; ++i) {
    if (i) out += ",";
    out += v[i].str();
  }
  if (v.size() > cap) out += ",...";
  return out + "}";
}

/// Smallest-period coset fit of a finite shift set on a symmetric window.
std::optional<ReflectionSpace> fit_space(const std::vector<Rat>& values,
                                         const QSubgroup& group,
                                         const Rat& core) {
  if (values.empty()) return std::nullopt;
  for (long long k : {1, 2, 3, 4}) {
    std::vector<long long> residues;
    bool member_ok = true;
    for (const Rat& v : values) {
      if (!group.member(v)) {
        member_ok = false;
        break;
      }
      residues.push_back(group.coset_index(v, k));
    }
    if (!member_ok) return std::nullopt;
    std::sort(residues.begin(), residues.end());
    residues.erase(std::unique(residues.begin(), residues.end()),
                   residues.end());
    ReflectionSpace candidate =
        ReflectionSpace::from_indices(group, k, residues);
    if (candidate.window(core) == values) return candidate;
  }
  return std::nullopt;
}

}  // namespace

Decomposition decompose(
    const LearsWindow& window,
    const std::optional<std::map<RootVector, RootVector>>& base_choice) {
  Decomposition out;
  Report& rep = out.report;
  if (window.roots.empty())
    throw std::invalid_argument("decompose: empty window");

  // Collect Δ and raw per-root shift parts.
  std::map<RootVector, std::vector<RootVector>> raw;
  for (const auto& r : window.roots)
    raw[r.eps_part()].push_back(r.null_part());
  for (auto& [eps, parts] : raw) {
    std::sort(parts.begin(), parts.end());
    out.delta.push_back(eps);
  }
  out.shift_parts = raw;

  auto recognized = recognize_type(out.delta);
  if (!recognized)
    throw std::invalid_argument(
        "decompose: finite part is not a recognized irreducible type");
  out.desc = *recognized;
  rep.set_meta("type", out.desc.label());

  std::vector<LengthClass> classes = length_partition(out.delta);

  std::set<int> null_indices;
  for (const auto& r : window.roots)
    for (const auto& [j, v] : r.nulls()) null_indices.insert(j);
  int null_dim = static_cast<int>(null_indices.size());
  rep.set_meta("null dimension", std::to_string(null_dim));

  // Raw constancy: shift-part sets agree within each length class. Sets at
  // the raw level are directly comparable (same window for every root).
  {
    auto& item = rep.add("class constancy (raw)");
    std::map<LengthClass, const std::vector<RootVector>*> rep_parts;
    for (size_t i = 0; i < out.delta.size(); ++i) {
      auto& expected = rep_parts[classes[i]];
      const auto& got = raw[out.delta[i]];
      if (!expected) {
        expected = &got;
      } else if (*expected != got) {
        item.fail("shift sets differ inside one length class at " +
                  out.delta[i].str());
      }
      ++item.checked_count;
    }
    if (item.status == "fail")
      throw std::invalid_argument(
          "decompose: shift sets not constant on a length class");
  }

  if (null_dim != 1) {
    auto& item = rep.add("triple fit");
    item.status = "skip";
    item.witnesses.push_back(
        "null dimension " + std::to_string(null_dim) +
        ": per-class shift sets reported, periodic fit is defined for "
        "dimension 1");
    return out;
  }
  int delta_index = *null_indices.begin();

  // Scalar shifts per finite root.
  std::map<RootVector, std::vector<Rat>> scalar;
  for (const auto& [eps, parts] : raw) {
    std::vector<Rat>& vals = scalar[eps];
    for (const auto& p : parts) vals.push_back(p.null_at(delta_index));
    std::sort(vals.begin(), vals.end());
  }

  // Reflectable base of the reduced finite part, lifted through chosen
  // window representatives.
  RootSystem finite;
  finite.desc = out.desc;
  finite.roots = out.delta;
  finite.classes = classes;
  for (LengthClass c : classes) finite.class_sizes[c]++;
  RootSystem red = reduced_subsystem(finite);
  ReflectableBase rbase = reflectable_base(red);

  std::vector<Rat> base_shifts;
  Rat max_shift(0);
  for (const auto& b : rbase.base) {
    Rat s(0);
    if (base_choice) {
      auto it = base_choice->find(b);
      if (it == base_choice->end())
        throw std::invalid_argument(
            "decompose: base choice misses base root " + b.str());
      if (!(it->second.eps_part() == b) || !window.contains(it->second))
        throw std::invalid_argument(
            "decompose: base choice for " + b.str() +
            " is not a window root over that finite root");
      s = it->second.null_at(delta_index);
    } else {
      const auto& vals = scalar[b];
      if (!std::binary_search(vals.begin(), vals.end(), Rat(0))) {
        s = vals[0];
        for (const Rat& v : vals)
          if (v.abs() < s.abs() || (v.abs() == s.abs() && s < v)) s = v;
      }
    }
    base_shifts.push_back(s);
    max_shift = std::max(max_shift, s.abs());
  }

  SpanSolver solver(([&] {
    QMat rows;
    for (const auto& b : rbase.base) {
      QVec row;
      for (const auto& [i, v] : b.eps()) {
        if (static_cast<size_t>(i) >= row.size()) row.resize(i + 1, Rat(0));
        row[i] = v;
      }
      rows.push_back(std::move(row));
    }
    return rows;
  })());

  // Shift sets relative to the lifted base, on the safe core window where
  // the raw window determines them completely.
  Rat core = window.bound;
  std::map<RootVector, Rat> lambda;
  for (size_t i = 0; i < out.delta.size(); ++i) {
    QVec row;
    for (const auto& [idx, v] : out.delta[i].eps()) {
      if (static_cast<size_t>(idx) >= row.size()) row.resize(idx + 1, Rat(0));
      row[idx] = v;
    }
    auto coords = solver.coords(row);
    if (!coords)
      throw std::invalid_argument("decompose: no valid base lift for " +
                                  out.delta[i].str());
    Rat l(0);
    for (size_t j = 0; j < coords->size(); ++j)
      l += (*coords)[j] * base_shifts[j];
    lambda[out.delta[i]] = l;
    core = std::min(core, window.bound - l.abs());
  }
  rep.set_meta("core bound", core.str());
  if (core < Rat(0))
    throw std::invalid_argument(
        "decompose: base representatives shift beyond the window");
  out.core = core;

  std::map<RootVector, std::vector<Rat>> lifted;
  for (const auto& [eps, vals] : scalar) {
    std::vector<Rat> v;
    const Rat& l = lambda[eps];
    for (const Rat& t : vals) {
      Rat u = t - l;
      if (u.abs() <= core) v.push_back(u);
    }
    lifted[eps] = std::move(v);
  }
  out.shifts = lifted;

  // Lifted constancy on the core; representatives per class.
  std::map<LengthClass, std::vector<Rat>> class_vals;
  {
    auto& item = rep.add("class constancy (lifted)");
    for (size_t i = 0; i < out.delta.size(); ++i) {
      auto [it, fresh] =
          class_vals.emplace(classes[i], lifted[out.delta[i]]);
      if (!fresh && it->second != lifted[out.delta[i]])
        item.fail("lifted shift sets differ inside one length class at " +
                  out.delta[i].str());
      ++item.checked_count;
    }
    if (item.status == "fail")
      throw std::invalid_argument(
          "decompose: lifted shift sets not constant on a length class");
  }

  // Fit periodic shapes over the declared group.
  const QSubgroup& group = window.spec.group;
  auto& fit_item = rep.add("triple fit");
  auto fit = [&](LengthClass c) -> std::optional<ReflectionSpace> {
    auto it = class_vals.find(c);
    if (it == class_vals.end()) return std::nullopt;
    auto space = fit_space(it->second, group, core);
    if (!space)
      fit_item.fail("no periodic fit for " + to_string(c) + " shifts " +
                    join_rats(it->second));
    return space;
  };
  auto s_fit = fit(LengthClass::short_root);
  auto l_fit = fit(LengthClass::long_root);
  auto e_fit = fit(LengthClass::extra_long_root);
  fit_item.checked_count = static_cast<long long>(class_vals.size());

  if (s_fit && fit_item.status == "pass") {
    Triple t{*s_fit, l_fit, e_fit};

    // Shift normalization: move 0 into S (and L) via the equivalence of
    // shifted triples; E moves by twice the short shift.
    Rat s_norm(0);
    if (!t.S.contains(Rat(0))) {
      auto w = t.S.window(core);
      if (!w.empty()) {
        s_norm = w[0];
        for (const Rat& v : w)
          if (v.abs() < s_norm.abs() || (v.abs() == s_norm.abs() && s_norm < v))
            s_norm = v;
        t.S = t.S.shifted(s_norm);
        if (t.E) t.E = t.E->shifted(s_norm * Rat(2));
      }
    }
    if (t.L && !t.L->contains(Rat(0))) {
      auto w = t.L->window(core);
      if (!w.empty()) {
        Rat l_norm = w[0];
        for (const Rat& v : w)
          if (v.abs() < l_norm.abs() || (v.abs() == l_norm.abs() && l_norm < v))
            l_norm = v;
        t.L = t.L->shifted(l_norm);
        out.base_shift_long = l_norm;
      }
    }
    if (!s_norm.is_zero()) out.base_shift = s_norm;

    auto& norm_item = rep.add("shift normalization (0 in reduced shifts)");
    norm_item.checked_count = 1;
    if (!t.S.contains(Rat(0)))
      norm_item.fail("0 not in S after normalization");
    if (t.L && !t.L->contains(Rat(0)))
      norm_item.fail("0 not in L after normalization");

    // (S1): S_{class(b)} - n*S_{class(a)} inside S_{class(b)} for every
    // Cartan integer n occurring between the classes.
    {
      auto& item = rep.add("S1 residue closure");
      std::set<std::pair<int, long long>> seen;  // (class pair key, n)
      for (size_t a = 0; a < out.delta.size(); ++a)
        for (size_t b = 0; b < out.delta.size(); ++b) {
          long long n = cartan_int(out.delta[b], out.delta[a]);
          if (n == 0) continue;
          int key = static_cast<int>(classes[a]) * 4 +
                    static_cast<int>(classes[b]);
          if (!seen.insert({key, n}).second) continue;
          if (!t.has(classes[a]) || !t.has(classes[b])) continue;
          const ReflectionSpace& sa = t.for_class(classes[a]);
          const ReflectionSpace& sb = t.for_class(classes[b]);
          ++item.checked_count;
          if (!shift_into(sb, sb, -n, sa))
            item.fail("S_beta - " + std::to_string(n) +
                      "*S_alpha escapes for classes " +
                      to_string(classes[b]) + "/" + to_string(classes[a]));
        }
    }

    // (S3)/reducedness: window doubles agree with E meeting 2S.
    {
      auto& item = rep.add("S3 reducedness");
      item.checked_count = 1;
      bool window_reduced = is_reduced(window.roots);
      bool triple_reduced = !t.E || !scaled_intersects(*t.E, 2, t.S);
      if (window_reduced != triple_reduced)
        item.fail(std::string("window ") +
                  (window_reduced ? "reduced" : "nonreduced") +
                  " but triple says otherwise");
      rep.set_meta("reduced", triple_reduced ? "1" : "0");
    }

    out.triple = std::move(t);
  }

  return out;
}

// --- restrict_to_ears ----------------------------------------------------------

LearsWindow restrict_to_ears(const LearsWindow& window,
                             const std::vector<int>& sub_index,
                             const std::vector<Rat>& shift_generators) {
  std::set<int> keep(sub_index.begin(), sub_index.end());
  QSubgroup lambda = QSubgroup::from_generators(shift_generators);

  std::vector<RootVector> kept;
  std::vector<RootVector> delta;
  for (const auto& r : window.roots) {
    bool inside = true;
    for (const auto& [i, v] : r.eps())
      if (!keep.count(i)) {
        inside = false;
        break;
      }
    if (!inside) continue;
    bool shifts_ok = true;
    for (const auto& [j, v] : r.nulls())
      if (!lambda.member(v)) {
        shifts_ok = false;
        break;
      }
    if (!shifts_ok) continue;
    kept.push_back(r);
    delta.push_back(r.eps_part());
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  std::sort(delta.begin(), delta.end());
  delta.erase(std::unique(delta.begin(), delta.end()), delta.end());
  if (delta.empty())
    throw std::invalid_argument("restrict: no roots over the sub-index");

  // Irreducibility of the induced finite part.
  {
    std::vector<int> comp(delta.size(), -1);
    std::vector<size_t> stack = {0};
    comp[0] = 0;
    while (!stack.empty()) {
      size_t cur = stack.back();
      stack.pop_back();
      for (size_t j = 0; j < delta.size(); ++j)
        if (comp[j] < 0 && !form(delta[cur], delta[j]).is_zero()) {
          comp[j] = 0;
          stack.push_back(j);
        }
    }
    for (size_t j = 0; j < delta.size(); ++j)
      if (comp[j] < 0)
        throw std::invalid_argument(
            "restrict: induced finite part is reducible");
  }

  auto recognized = recognize_type(delta);
  if (!recognized)
    throw std::invalid_argument(
        "restrict: induced finite part is not irreducible of known type");

  LearsWindow out{LearsSpec{*recognized, lambda,
                            Triple{ReflectionSpace::full_group(lambda),
                                   std::nullopt, std::nullopt},
                            false},
                  window.bound, std::move(kept), window.null_dim};

  // Fit the actual triple when the sub-window has scalar shifts.
  if (!lambda.is_trivial()) {
    try {
      Decomposition d = decompose(out);
      if (d.triple) out.spec.triple = *d.triple;
    } catch (const std::exception&) {
      // leave the full-group placeholder; the window itself is returned
    }
  } else {
    // Nullity-0 degenerate window: finite system over the trivial group.
    out.spec.triple = Triple{ReflectionSpace::full_group(lambda),
                             std::nullopt, std::nullopt};
  }
  out.spec.derive_reduced();

  Report check = verify_window_roots(out.roots, out.bound);
  if (!check.ok())
    throw std::logic_error("restrict: result fails windowed axioms");
  return out;
}

// --- group_decomposition_check --------------------------------------------------

Report group_decomposition_check(const LearsWindow& window) {
  Report rep;
  std::vector<RootVector> delta;
  for (const auto& r : window.roots) delta.push_back(r.eps_part());
  std::sort(delta.begin(), delta.end());
  delta.erase(std::unique(delta.begin(), delta.end()), delta.end());

  QMat gen;
  for (const auto& d : delta) {
    QVec row;
    for (const auto& [i, v] : d.eps()) {
      if (static_cast<size_t>(i) >= row.size()) row.resize(i + 1, Rat(0));
      row[i] = v;
    }
    gen.push_back(std::move(row));
  }
  LatticeMembership lattice(gen);

  const QSubgroup& g = window.spec.group;

  // Every pairwise sum splits as (ε-lattice element) + (δ-part in G).
  {
    auto& item = rep.add("sum splitting");
    const long long n = static_cast<long long>(window.roots.size());
    auto chunks = chunked_map<PairScanResult>(n, [&](long long lo,
                                                     long long hi) {
      PairScanResult res;
      for (long long i = lo; i < hi; ++i)
        for (long long j = 0; j < n; ++j) {
          RootVector sum = window.roots[static_cast<size_t>(i)] +
                           window.roots[static_cast<size_t>(j)];
          ++res.checked;
          QVec row;
          for (const auto& [idx, v] : sum.eps()) {
            if (static_cast<size_t>(idx) >= row.size())
              row.resize(idx + 1, Rat(0));
            row[idx] = v;
          }
          bool eps_ok = lattice.contains(row);
          bool null_ok = true;
          for (const auto& [idx, v] : sum.nulls())
            if (!g.member(v)) null_ok = false;
          if ((!eps_ok || !null_ok) && res.witnesses.size() < 4)
            res.witnesses.push_back(
                "sum " + sum.str() + (eps_ok ? "" : " (eps outside lattice)") +
                (null_ok ? "" : " (shift outside group)"));
        }
      return res;
    });
    for (const auto& ch : chunks) {
      item.checked_count += ch.checked;
      for (const auto& w : ch.witnesses)
        if (item.witnesses.size() < 4) item.fail(w);
    }
  }

  // The δ-parts of same-ε differences generate exactly G at window scale.
  {
    auto& item = rep.add("shift group generated");
    item.checked_count = 1;
    std::map<RootVector, std::vector<RootVector>> by_eps;
    for (const auto& r : window.roots)
      by_eps[r.eps_part()].push_back(r.null_part());
    std::vector<Rat> diffs;
    std::set<int> null_indices;
    for (const auto& [eps, parts] : by_eps)
      for (size_t i = 0; i < parts.size(); ++i)
        for (size_t j = i + 1; j < parts.size(); ++j) {
          RootVector d = parts[j] - parts[i];
          for (const auto& [idx, v] : d.nulls()) {
            diffs.push_back(v);
            null_indices.insert(idx);
          }
        }
    if (window.null_dim == 1 && null_indices.size() <= 1) {
      QSubgroup generated = QSubgroup::from_generators(diffs);
      if (!generated.same_set(g))
        item.fail("differences generate " + generated.str() + ", group is " +
                  g.str());
    } else {
      item.status = "skip";
      item.witnesses.push_back(
          "generated-group comparison is defined for null dimension 1");
    }
  }

  return rep;
}

}  // namespace rf
