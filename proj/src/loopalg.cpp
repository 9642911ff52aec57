#include "rootforge/loopalg.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "rootforge/lears.hpp"
#include "rootforge/parallel.hpp"

namespace rf {

// ---------------------------------------------------------------------------
// LoopLabel

std::string LoopLabel::str() const {
  switch (family) {
    case Family::A: return "A";
    case Family::B: return twist == 2 ? "B(2)" : "B";
    case Family::C: return twist == 2 ? "C(2)" : "C";
    case Family::D: return "D";
    case Family::BC: return "BC";
    case Family::G2: return twist == 3 ? "G2(3)" : "G2(1)";
    default: return "?";
  }
}

LoopLabel LoopLabel::parse(const std::string& token) {
  if (token == "A") return {Family::A, 1};
  if (token == "B") return {Family::B, 1};
  if (token == "C") return {Family::C, 1};
  if (token == "D") return {Family::D, 1};
  if (token == "G2(1)") return {Family::G2, 1};
  if (token == "B(2)") return {Family::B, 2};
  if (token == "C(2)") return {Family::C, 2};
  if (token == "BC") return {Family::BC, 2};
  if (token == "G2(3)") return {Family::G2, 3};
  throw std::invalid_argument("loopalg: unknown label '" + token +
                              "' (expected A, B, C, D, G2(1), B(2), C(2), "
                              "BC, or G2(3))");
}

// ---------------------------------------------------------------------------
// Cocycle

Cocycle Cocycle::trivial() { return Cocycle(); }

Cocycle Cocycle::power(const Rat& lambda) {
  if (lambda.is_zero())
    throw std::invalid_argument("cocycle: power base must be nonzero");
  Cocycle c;
  c.mode_ = Mode::power;
  c.lambda_ = lambda;
  return c;
}

Cocycle Cocycle::table(std::map<std::pair<Rat, Rat>, Rat> entries) {
  Cocycle c;
  c.mode_ = Mode::table;
  c.table_ = std::move(entries);
  return c;
}

Rat Cocycle::value(const Rat& g, const Rat& h) const {
  switch (mode_) {
    case Mode::trivial: return Rat(1);
    case Mode::power: {
      Rat e = g * h;
      if (!e.is_integer())
        throw std::domain_error("cocycle: power exponent " + e.str() +
                                " is not an integer");
      return lambda_.pow(e.num());
    }
    case Mode::table: {
      auto it = table_.find({g, h});
      if (it == table_.end())
        throw std::out_of_range("cocycle: no table entry at (" + g.str() +
                                "," + h.str() + ")");
      return it->second;
    }
  }
  return Rat(1);
}

bool Cocycle::defined(const Rat& g, const Rat& h) const {
  switch (mode_) {
    case Mode::trivial: return true;
    case Mode::power: return (g * h).is_integer();
    case Mode::table: return table_.count({g, h}) > 0;
  }
  return false;
}

CheckItem Cocycle::validate(const std::vector<Rat>& degrees) const {
  CheckItem item{"cocycle", "pass", {}, 0, 0};
  for (const Rat& g : degrees)
    for (const Rat& h : degrees) {
      if (!defined(g, h) || !defined(h, g)) {
        ++item.unchecked_count;
        continue;
      }
      Rat v = value(g, h);
      if (v.is_zero())
        item.fail("tau(" + g.str() + "," + h.str() + ") = 0");
      else if (!(v == value(h, g)))
        item.fail("tau(" + g.str() + "," + h.str() + ") != tau(" + h.str() +
                  "," + g.str() + ")");
      ++item.checked_count;
      if (item.status == "fail" && item.witnesses.size() >= 4) return item;
    }
  for (const Rat& g : degrees)
    for (const Rat& h : degrees)
      for (const Rat& k : degrees) {
        if (!defined(g + h, k) || !defined(g, h) || !defined(g, h + k) ||
            !defined(h, k)) {
          ++item.unchecked_count;
          continue;
        }
        if (!(value(g + h, k) * value(g, h) == value(g, h + k) * value(h, k)))
          item.fail("cocycle law fails at (" + g.str() + "," + h.str() + "," +
                    k.str() + ")");
        ++item.checked_count;
        if (item.status == "fail" && item.witnesses.size() >= 4) return item;
      }
  return item;
}

std::string Cocycle::str() const {
  switch (mode_) {
    case Mode::trivial: return "trivial";
    case Mode::power: return "power(" + lambda_.str() + ")";
    case Mode::table: return "table(" + std::to_string(table_.size()) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Fiber-level bracket dispatch

namespace {

enum class Cat { mat, vec, der, oct };

Cat cat_of(FiberKind k) {
  switch (k) {
    case FiberKind::natural_vector: return Cat::vec;
    case FiberKind::octonion_derivations: return Cat::der;
    case FiberKind::octonion_traceless: return Cat::oct;
    default: return Cat::mat;
  }
}

Octonion to_octonion(const QVec& flat) {
  std::array<Rat, 8> c;
  for (int i = 0; i < 8; ++i) c[i] = flat[i];
  return Octonion(c);
}

/// Bracket of two fiber elements given their parts; returns the target part
/// index and the flat value there (possibly zero).
std::pair<int, QVec> part_bracket(const std::vector<LoopPart>& parts,
                                  int twist, int pa, const QVec& fa, int pb,
                                  const QVec& fb) {
  const Cat ca = cat_of(parts[pa].fiber.kind());
  const Cat cb = cat_of(parts[pb].fiber.kind());
  const int m = twist < 1 ? 1 : twist;
  const int sec = (parts[pa].sector + parts[pb].sector) % m;
  auto find_part = [&](Cat want) -> int {
    for (size_t t = 0; t < parts.size(); ++t)
      if (parts[t].sector == sec && cat_of(parts[t].fiber.kind()) == want)
        return static_cast<int>(t);
    throw std::logic_error("loopalg: no target part at sector " +
                           std::to_string(sec));
  };
  if (ca == Cat::mat && cb == Cat::mat) {
    const int n = parts[pa].fiber.matrix_size();
    if (n != parts[pb].fiber.matrix_size())
      throw std::logic_error("loopalg: matrix size mismatch");
    return {find_part(Cat::mat), mat_commutator(n, fa, fb)};
  }
  if (ca == Cat::mat && cb == Cat::vec)
    return {find_part(Cat::vec),
            mat_apply(parts[pa].fiber.matrix_size(), fa, fb)};
  if (ca == Cat::vec && cb == Cat::mat) {
    QVec r = mat_apply(parts[pb].fiber.matrix_size(), fb, fa);
    for (auto& x : r) x = -x;
    return {find_part(Cat::vec), std::move(r)};
  }
  if (ca == Cat::vec && cb == Cat::vec)
    return {find_part(Cat::mat),
            dvv_flat(parts[pa].fiber.index_size(), fa, fb)};
  if (ca == Cat::der && cb == Cat::der)
    return {find_part(Cat::der), mat_commutator(8, fa, fb)};
  if (ca == Cat::der && cb == Cat::oct)
    return {find_part(Cat::oct), mat_apply(8, fa, fb)};
  if (ca == Cat::oct && cb == Cat::der) {
    QVec r = mat_apply(8, fb, fa);
    for (auto& x : r) x = -x;
    return {find_part(Cat::oct), std::move(r)};
  }
  if (ca == Cat::oct && cb == Cat::oct) {
    Octonion x = to_octonion(fa), y = to_octonion(fb);
    if (sec == 0)
      return {find_part(Cat::der), flatten(derivation_dxy(x, y))};
    Octonion s = x.star(y);
    QVec r;
    for (int i = 0; i < 8; ++i) r.push_back(s.coord(i));
    return {find_part(Cat::oct), std::move(r)};
  }
  throw std::logic_error("loopalg: unsupported fiber pair");
}

std::vector<std::pair<FiberKind, int>> plan_parts(const LoopLabel& label) {
  switch (label.family) {
    case Family::A: return {{FiberKind::special_linear, 0}};
    case Family::B:
      if (label.twist == 2)
        return {{FiberKind::odd_orthogonal, 0},
                {FiberKind::natural_vector, 1}};
      return {{FiberKind::odd_orthogonal, 0}};
    case Family::C:
      if (label.twist == 2)
        return {{FiberKind::symplectic, 0}, {FiberKind::symp_symmetric, 1}};
      return {{FiberKind::symplectic, 0}};
    case Family::D: return {{FiberKind::even_orthogonal, 0}};
    case Family::BC:
      return {{FiberKind::odd_orthogonal, 0}, {FiberKind::odd_symmetric, 1}};
    case Family::G2:
      if (label.twist == 3)
        return {{FiberKind::octonion_derivations, 0},
                {FiberKind::octonion_traceless, 1},
                {FiberKind::octonion_traceless, 2}};
      return {{FiberKind::octonion_derivations, 0}};
    default:
      throw std::invalid_argument("loopalg: family has no loop construction");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// GradedLieWindow

std::optional<BracketTerms> GradedLieWindow::bracket(int i, int j) const {
  if (i < 0 || j < 0 || i >= dim() || j >= dim())
    throw std::out_of_range("loopalg: symbol index out of range");
  if (i == j) return BracketTerms{};
  const LoopSymbol& a = basis[static_cast<size_t>(i)];
  const LoopSymbol& b = basis[static_cast<size_t>(j)];
  if (a.role == LoopSymbol::Role::center ||
      b.role == LoopSymbol::Role::center)
    return BracketTerms{};
  if (a.role == LoopSymbol::Role::derivation) {
    if (!b.degree.is_zero()) return BracketTerms{{j, b.degree}};
    return BracketTerms{};
  }
  if (b.role == LoopSymbol::Role::derivation) {
    if (!a.degree.is_zero()) return BracketTerms{{i, -a.degree}};
    return BracketTerms{};
  }
  auto it = table.find({std::min(i, j), std::max(i, j)});
  if (it == table.end()) return std::nullopt;
  if (i < j) return it->second;
  BracketTerms neg = it->second;
  for (auto& t : neg) t.second = -t.second;
  return neg;
}

std::string GradedLieWindow::str() const {
  std::string parts_s;
  for (const auto& p : parts) {
    if (!parts_s.empty()) parts_s += ",";
    parts_s += p.name;
  }
  std::string out = "label=" + label.str() +
                    " index=" + std::to_string(index_size) +
                    " group=" + group.str() + " sub=" + sub.str() +
                    " tau=" + tau.str() + " bound=" + bound.str() +
                    " dim=" + std::to_string(dim()) + " parts=" + parts_s;
  if (has_center) out += " center";
  if (has_derivation) out += " derivation";
  return out;
}

// ---------------------------------------------------------------------------
// Construction

GradedLieWindow build_loop_algebra(const LoopLabel& label, int index_size,
                                   const QSubgroup& group, const Cocycle& tau,
                                   const Rat& bound) {
  if (bound.is_negative())
    throw std::invalid_argument("loopalg: negative degree bound");
  if (label.family == Family::G2 && index_size != 3)
    throw std::invalid_argument(
        "loopalg: G2 labels use the fixed three-coordinate index");
  if (label.twist > 1 && group.divisible_by(label.twist))
    throw std::invalid_argument(
        "loopalg: the degree group is " + std::to_string(label.twist) +
        "-divisible, so the subgroup of index " +
        std::to_string(label.twist) + " does not exist");

  GradedLieWindow w{label,
                    index_size,
                    group,
                    label.twist > 1 ? group.scaled(label.twist) : group,
                    tau,
                    bound,
                    {},
                    {},
                    {},
                    0,
                    false,
                    false,
                    -1,
                    -1,
                    {},
                    {}};

  const Rat g1 = group.effective_generator();

  CheckItem cocy = tau.validate(group.window(bound));
  bool cocycle_ok = cocy.status != "fail";
  std::string cocycle_witness =
      cocy.witnesses.empty() ? "" : cocy.witnesses.front();
  w.build_report.items.push_back(std::move(cocy));
  if (!cocycle_ok)
    throw std::invalid_argument("loopalg: cocycle invalid: " +
                                cocycle_witness);

  for (auto [kind, sector] : plan_parts(label)) {
    FiberBasis fiber = build_fiber(kind, index_size);
    std::string name = to_string(kind) + "@" + std::to_string(sector);
    w.parts.push_back(
        {std::move(fiber), sector, g1 * Rat(sector), std::move(name)});
  }

  struct Key {
    Rat deg;
    int part;
    int member;
  };
  std::vector<Key> keys;
  for (size_t p = 0; p < w.parts.size(); ++p) {
    const LoopPart& part = w.parts[p];
    for (const Rat& x : w.sub.window(bound + part.sector_shift.abs())) {
      Rat d = part.sector_shift + x;
      if (d.abs() > bound) continue;
      for (int m = 0; m < part.fiber.dim(); ++m)
        keys.push_back({d, static_cast<int>(p), m});
    }
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (!(a.deg == b.deg)) return a.deg < b.deg;
    if (a.part != b.part) return a.part < b.part;
    return a.member < b.member;
  });
  std::map<std::pair<Rat, int>, int> base_index;
  for (const Key& k : keys) {
    const FiberElement& e =
        w.parts[static_cast<size_t>(k.part)].fiber.elements()[static_cast<
            size_t>(k.member)];
    base_index.try_emplace({k.deg, k.part},
                           static_cast<int>(w.basis.size()));
    w.basis.push_back({LoopSymbol::Role::fiber, k.part, k.member, e.weight,
                       k.deg, e.name + "@t^" + k.deg.str()});
  }

  CheckItem grading{"bracket grading", "pass", {}, 0, 0};
  const int n = w.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const LoopSymbol& a = w.basis[static_cast<size_t>(i)];
      const LoopSymbol& b = w.basis[static_cast<size_t>(j)];
      Rat deg = a.degree + b.degree;
      if (deg.abs() > bound || !tau.defined(a.degree, b.degree)) {
        ++w.overflow_pairs;
        continue;
      }
      auto [target, flat] = part_bracket(
          w.parts, label.twist, a.part,
          w.parts[static_cast<size_t>(a.part)].fiber.elements()
          [static_cast<size_t>(a.member)].flat,
          b.part,
          w.parts[static_cast<size_t>(b.part)].fiber.elements()
          [static_cast<size_t>(b.member)].flat);
      BracketTerms terms;
      bool zero = true;
      for (const auto& x : flat)
        if (!x.is_zero()) { zero = false; break; }
      if (!zero) {
        Rat factor = tau.value(a.degree, b.degree);
        QVec coords = w.parts[static_cast<size_t>(target)].fiber.coords(flat);
        int base = base_index.at({deg, target});
        for (size_t m = 0; m < coords.size(); ++m) {
          if (coords[m].is_zero()) continue;
          int sym = base + static_cast<int>(m);
          terms.emplace_back(sym, coords[m] * factor);
          const LoopSymbol& out = w.basis[static_cast<size_t>(sym)];
          ++grading.checked_count;
          if (!(out.weight == a.weight + b.weight) &&
              grading.witnesses.size() < 4)
            grading.fail("[" + a.name + "," + b.name +
                         "] leaves the weight grading at " + out.name);
          if (!(out.degree == deg) && grading.witnesses.size() < 4)
            grading.fail("[" + a.name + "," + b.name +
                         "] leaves the degree grading at " + out.name);
        }
      }
      w.table.emplace(std::make_pair(i, j), std::move(terms));
    }
  w.build_report.items.push_back(std::move(grading));
  w.build_report.set_meta("algebra", w.str());
  return w;
}

// ---------------------------------------------------------------------------
// Central extension

namespace {

/// Reference pairing between elements of two (possibly different) parts:
/// the fiber pairing inside one part, the octonion trace across the two
/// trace-zero octonion copies, the matrix trace across equal-size matrix
/// parts, zero otherwise.
Rat raw_pairing(const std::vector<LoopPart>& parts, int p, int q,
                const QVec& a, const QVec& b) {
  if (p == q) return fiber_pairing(parts[static_cast<size_t>(p)].fiber, a, b);
  const FiberBasis& A = parts[static_cast<size_t>(p)].fiber;
  const FiberBasis& B = parts[static_cast<size_t>(q)].fiber;
  if (A.kind() == FiberKind::octonion_traceless &&
      B.kind() == FiberKind::octonion_traceless)
    return (to_octonion(a) * to_octonion(b)).trace();
  const int n = A.matrix_size();
  if (n > 0 && n == B.matrix_size()) {
    Rat out(0);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out += a[r * n + c] * b[c * n + r];
    return out;
  }
  return Rat(0);
}

struct PairingBlocks {
  std::vector<std::pair<int, int>> blocks;  // part pairs p <= q

  int index_of(int p, int q) const {
    auto key = std::minmax(p, q);
    for (size_t b = 0; b < blocks.size(); ++b)
      if (blocks[b] == std::make_pair(key.first, key.second))
        return static_cast<int>(b);
    return -1;
  }
};

/// The pairing blocks the extension term can ever sample: part pairs whose
/// sectors sum to zero mod the twist and whose reference pairing is not
/// identically zero.
PairingBlocks find_blocks(const GradedLieWindow& w) {
  PairingBlocks out;
  const int m = w.label.twist < 1 ? 1 : w.label.twist;
  for (int p = 0; p < static_cast<int>(w.parts.size()); ++p)
    for (int q = p; q < static_cast<int>(w.parts.size()); ++q) {
      if ((w.parts[static_cast<size_t>(p)].sector +
           w.parts[static_cast<size_t>(q)].sector) %
              m !=
          0)
        continue;
      bool nonzero = false;
      for (const auto& ea : w.parts[static_cast<size_t>(p)].fiber.elements()) {
        for (const auto& eb :
             w.parts[static_cast<size_t>(q)].fiber.elements())
          if (!raw_pairing(w.parts, p, q, ea.flat, eb.flat).is_zero()) {
            nonzero = true;
            break;
          }
        if (nonzero) break;
      }
      if (nonzero) out.blocks.emplace_back(p, q);
    }
  return out;
}

std::string block_name(const GradedLieWindow& w, std::pair<int, int> b) {
  return w.parts[static_cast<size_t>(b.first)].name + "*" +
         w.parts[static_cast<size_t>(b.second)].name;
}

/// One invariance equation (a,[b,c]) vs ([a,b],c) as a row over the block
/// scales, plus the triple it came from for witness reporting.
struct InvarianceRow {
  QVec coeffs;
  int pa, ma, pb, mb, pc, mc;
};

std::vector<InvarianceRow> invariance_rows(const GradedLieWindow& w,
                                           const PairingBlocks& blocks) {
  std::vector<InvarianceRow> rows;
  const int m = w.label.twist < 1 ? 1 : w.label.twist;
  const int nparts = static_cast<int>(w.parts.size());
  for (int pa = 0; pa < nparts; ++pa)
    for (int pb = 0; pb < nparts; ++pb)
      for (int pc = 0; pc < nparts; ++pc) {
        if ((w.parts[static_cast<size_t>(pa)].sector +
             w.parts[static_cast<size_t>(pb)].sector +
             w.parts[static_cast<size_t>(pc)].sector) %
                m !=
            0)
          continue;
        const auto& ea = w.parts[static_cast<size_t>(pa)].fiber.elements();
        const auto& eb = w.parts[static_cast<size_t>(pb)].fiber.elements();
        const auto& ec = w.parts[static_cast<size_t>(pc)].fiber.elements();
        for (size_t ia = 0; ia < ea.size(); ++ia)
          for (size_t ib = 0; ib < eb.size(); ++ib) {
            auto [tab, fab] = part_bracket(w.parts, w.label.twist, pa,
                                           ea[ia].flat, pb, eb[ib].flat);
            for (size_t ic = 0; ic < ec.size(); ++ic) {
              auto [tbc, fbc] = part_bracket(w.parts, w.label.twist, pb,
                                             eb[ib].flat, pc, ec[ic].flat);
              Rat lhs = raw_pairing(w.parts, pa, tbc, ea[ia].flat, fbc);
              Rat rhs = raw_pairing(w.parts, tab, pc, fab, ec[ic].flat);
              if (lhs.is_zero() && rhs.is_zero()) continue;
              QVec row(blocks.blocks.size(), Rat(0));
              if (!lhs.is_zero()) {
                int b = blocks.index_of(pa, tbc);
                if (b < 0)
                  throw std::logic_error(
                      "loopalg: pairing outside the block list");
                row[static_cast<size_t>(b)] += lhs;
              }
              if (!rhs.is_zero()) {
                int b = blocks.index_of(tab, pc);
                if (b < 0)
                  throw std::logic_error(
                      "loopalg: pairing outside the block list");
                row[static_cast<size_t>(b)] -= rhs;
              }
              rows.push_back({std::move(row), pa, static_cast<int>(ia), pb,
                              static_cast<int>(ib), pc,
                              static_cast<int>(ic)});
            }
          }
      }
  return rows;
}

std::string element_name(const GradedLieWindow& w, int p, int m) {
  return w.parts[static_cast<size_t>(p)].fiber.elements()[static_cast<size_t>(
             m)].name +
         "[" + w.parts[static_cast<size_t>(p)].name + "]";
}

}  // namespace

GradedLieWindow central_extend(
    const GradedLieWindow& w,
    const std::optional<std::vector<Rat>>& scale_override) {
  if (w.has_center)
    throw std::invalid_argument("loopalg: center already present");

  PairingBlocks blocks = find_blocks(w);
  if (blocks.blocks.empty())
    throw std::invalid_argument(
        "loopalg: no pairing block carries the extension");
  std::vector<InvarianceRow> rows = invariance_rows(w, blocks);

  std::vector<Rat> kappa;
  if (scale_override) {
    if (scale_override->size() != blocks.blocks.size())
      throw std::invalid_argument(
          "loopalg: scale override needs one value per pairing block (" +
          std::to_string(blocks.blocks.size()) + ")");
    kappa = *scale_override;
  } else {
    QMat eqs;
    for (const auto& r : rows) eqs.push_back(r.coeffs);
    QMat kernel =
        nullspace_of(std::move(eqs), static_cast<int>(blocks.blocks.size()));
    if (kernel.empty())
      throw std::invalid_argument(
          "loopalg: form not invariant: the invariance equations force "
          "every block scale to zero");
    if (kernel.size() > 1)
      throw std::logic_error(
          "loopalg: pairing blocks are not linked by the bracket");
    kappa = kernel.front();
    if (kappa.front().is_zero())
      throw std::invalid_argument(
          "loopalg: form not invariant: the leading block scale degenerates");
    Rat norm = kappa.front().inv();
    for (auto& k : kappa) k *= norm;
    for (size_t b = 0; b < kappa.size(); ++b)
      if (kappa[b].is_zero())
        throw std::invalid_argument(
            "loopalg: form not invariant: block " +
            block_name(w, blocks.blocks[b]) + " degenerates to zero");
  }

  // Exhaustive invariance verification with the chosen scales.
  CheckItem invariance{"form invariance", "pass", {}, 0, 0};
  for (const auto& r : rows) {
    Rat acc(0);
    for (size_t b = 0; b < kappa.size(); ++b) acc += r.coeffs[b] * kappa[b];
    ++invariance.checked_count;
    if (!acc.is_zero()) {
      std::string witness =
          "(" + element_name(w, r.pa, r.ma) + ",[" +
          element_name(w, r.pb, r.mb) + "," + element_name(w, r.pc, r.mc) +
          "]) != ([" + element_name(w, r.pa, r.ma) + "," +
          element_name(w, r.pb, r.mb) + "]," + element_name(w, r.pc, r.mc) +
          ")";
      throw std::invalid_argument("loopalg: form not invariant: " + witness);
    }
  }

  GradedLieWindow out = w;
  out.has_center = true;
  out.center_index = out.dim();
  out.basis.push_back({LoopSymbol::Role::center, -1, -1, RootVector(), Rat(0),
                       "c"});
  out.form_scales.clear();
  for (size_t b = 0; b < blocks.blocks.size(); ++b)
    out.form_scales.emplace_back(block_name(w, blocks.blocks[b]), kappa[b]);

  auto sigma = [&](int i, int j) -> Rat {
    const LoopSymbol& a = w.basis[static_cast<size_t>(i)];
    const LoopSymbol& b = w.basis[static_cast<size_t>(j)];
    if (a.role != LoopSymbol::Role::fiber ||
        b.role != LoopSymbol::Role::fiber)
      return Rat(0);
    if (!(a.degree + b.degree).is_zero()) return Rat(0);
    int blk = blocks.index_of(a.part, b.part);
    if (blk < 0) return Rat(0);
    Rat raw = raw_pairing(
        w.parts, a.part, b.part,
        w.parts[static_cast<size_t>(a.part)].fiber.elements()
        [static_cast<size_t>(a.member)].flat,
        w.parts[static_cast<size_t>(b.part)].fiber.elements()
        [static_cast<size_t>(b.member)].flat);
    return kappa[static_cast<size_t>(blk)] * raw *
           w.tau.value(a.degree, b.degree) * a.degree;
  };

  CheckItem antisym{"center antisymmetry", "pass", {}, 0, 0};
  for (auto& [key, terms] : out.table) {
    Rat s = sigma(key.first, key.second);
    ++antisym.checked_count;
    if (!(sigma(key.second, key.first) == -s) && antisym.witnesses.size() < 4)
      antisym.fail("sigma is not antisymmetric at (" +
                   w.basis[static_cast<size_t>(key.first)].name + "," +
                   w.basis[static_cast<size_t>(key.second)].name + ")");
    if (!s.is_zero()) terms.emplace_back(out.center_index, s);
  }

  // 2-cocycle compatibility: the cyclic sum of sigma([x,y],z) vanishes on
  // every window triple with total degree zero.
  CheckItem cocompat{"extension cocycle", "pass", {}, 0, 0};
  auto sigma_terms = [&](const BracketTerms& terms, int k) -> Rat {
    Rat acc(0);
    for (const auto& [m, c] : terms) {
      if (m >= w.dim()) continue;  // the appended center never pairs
      acc += c * sigma(m, k);
    }
    return acc;
  };
  const int n = w.dim();
  for (int i = 0; i < n; ++i) {
    const LoopSymbol& a = w.basis[static_cast<size_t>(i)];
    if (a.role != LoopSymbol::Role::fiber) continue;
    for (int j = i + 1; j < n; ++j) {
      const LoopSymbol& b = w.basis[static_cast<size_t>(j)];
      if (b.role != LoopSymbol::Role::fiber) continue;
      for (int k = j + 1; k < n; ++k) {
        const LoopSymbol& c = w.basis[static_cast<size_t>(k)];
        if (c.role != LoopSymbol::Role::fiber) continue;
        if (!(a.degree + b.degree + c.degree).is_zero()) continue;
        auto ab = w.bracket(i, j), bc = w.bracket(j, k), ki = w.bracket(k, i);
        if (!ab || !bc || !ki) {
          ++cocompat.unchecked_count;
          continue;
        }
        Rat total = sigma_terms(*ab, k) + sigma_terms(*bc, i) +
                    sigma_terms(*ki, j);
        ++cocompat.checked_count;
        if (!total.is_zero() && cocompat.witnesses.size() < 4)
          cocompat.fail("cyclic sigma sum is " + total.str() + " at (" +
                        a.name + "," + b.name + "," + c.name + ")");
      }
    }
  }

  CheckItem scales{"form scales", "pass", {}, 0, 0};
  scales.checked_count = static_cast<long long>(kappa.size());
  for (const auto& [name, value] : out.form_scales)
    scales.witnesses.push_back(name + " scale=" + value.str());
  out.build_report.items.push_back(std::move(scales));
  out.build_report.items.push_back(std::move(invariance));
  out.build_report.items.push_back(std::move(antisym));
  out.build_report.items.push_back(std::move(cocompat));
  out.build_report.set_meta("algebra", out.str());
  return out;
}

GradedLieWindow add_degree_derivation(const GradedLieWindow& w) {
  if (!w.has_center)
    throw std::invalid_argument(
        "loopalg: adjoin the center before the degree derivation");
  if (w.has_derivation)
    throw std::invalid_argument("loopalg: derivation already present");
  GradedLieWindow out = w;
  out.has_derivation = true;
  out.derivation_index = out.dim();
  out.basis.push_back({LoopSymbol::Role::derivation, -1, -1, RootVector(),
                       Rat(0), "d"});

  CheckItem abelian{"H abelian", "pass", {}, 0, 0};
  std::vector<int> h;
  for (int i = 0; i < out.dim(); ++i) {
    const LoopSymbol& s = out.basis[static_cast<size_t>(i)];
    if (s.role != LoopSymbol::Role::fiber)
      h.push_back(i);
    else if (s.weight.is_zero() && s.degree.is_zero())
      h.push_back(i);
  }
  for (size_t x = 0; x < h.size(); ++x)
    for (size_t y = x + 1; y < h.size(); ++y) {
      auto b = out.bracket(h[x], h[y]);
      ++abelian.checked_count;
      if (!b) {
        ++abelian.unchecked_count;
        continue;
      }
      if (!b->empty() && abelian.witnesses.size() < 4)
        abelian.fail("[" + out.basis[static_cast<size_t>(h[x])].name + "," +
                     out.basis[static_cast<size_t>(h[y])].name +
                     "] is nonzero");
    }
  out.build_report.items.push_back(std::move(abelian));
  out.build_report.set_meta("algebra", out.str());
  return out;
}

// ---------------------------------------------------------------------------
// Root decomposition

std::vector<RootVector> root_decomposition(const GradedLieWindow& w) {
  std::vector<RootVector> roots;
  for (const LoopSymbol& s : w.basis) {
    if (s.role != LoopSymbol::Role::fiber || s.weight.is_zero()) continue;
    roots.push_back(s.weight.with_null(1, s.degree));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<RootVector> predicted_roots(const GradedLieWindow& w) {
  RootSystemDesc desc{w.label.family, w.index_size};
  if (!desc.valid())
    throw std::invalid_argument("loopalg: no catalog prediction: " +
                               to_string(w.label.family) + " at index " +
                               std::to_string(w.index_size) +
                               " is below the family threshold");
  RootSystem sys = generate(desc);
  bool has_long = false, has_extra = false;
  for (LengthClass c : sys.present_classes()) {
    if (c == LengthClass::long_root) has_long = true;
    if (c == LengthClass::extra_long_root) has_extra = true;
  }
  ReflectionSpace full = ReflectionSpace::full_group(w.group);
  Triple t{full, std::nullopt, std::nullopt};
  if (has_long) {
    if (w.label.twist > 1 && w.label.family != Family::BC)
      t.L = ReflectionSpace::cosets(w.group, w.label.twist, {Rat(0)});
    else
      t.L = full;
  }
  if (has_extra)
    t.E = ReflectionSpace::cosets(w.group, 2,
                                  {w.group.effective_generator()});
  LearsSpec spec{desc, w.group, std::move(t), false};
  spec.derive_reduced();
  return construct(spec, w.bound).roots;
}

CheckItem realization_matches(const GradedLieWindow& w) {
  CheckItem item{"realization roots", "pass", {}, 0, 0};
  std::vector<RootVector> predicted;
  try {
    predicted = predicted_roots(w);
  } catch (const std::invalid_argument& e) {
    item.status = "skip";
    item.witnesses.emplace_back(e.what());
    return item;
  }
  std::vector<RootVector> realized = root_decomposition(w);
  item.checked_count = static_cast<long long>(predicted.size());
  for (const RootVector& r : predicted)
    if (!std::binary_search(realized.begin(), realized.end(), r) &&
        item.witnesses.size() < 4)
      item.fail("predicted root missing from the realization: " + r.str());
  for (const RootVector& r : realized)
    if (!std::binary_search(predicted.begin(), predicted.end(), r) &&
        item.witnesses.size() < 4)
      item.fail("realized root outside the prediction: " + r.str());
  return item;
}

// ---------------------------------------------------------------------------
// Jacobi checks

namespace {

struct JacobiChunk {
  long long checked = 0;
  long long unchecked = 0;
  std::vector<std::string> witnesses;
};

bool accumulate_nested(const GradedLieWindow& w,
                       const std::optional<BracketTerms>& outer, int z,
                       std::map<int, Rat>& acc) {
  if (!outer) return false;
  for (const auto& [m, c] : *outer) {
    auto inner = w.bracket(m, z);
    if (!inner) return false;
    for (const auto& [s, r] : *inner) acc[s] += c * r;
  }
  return true;
}

}  // namespace

CheckItem jacobi_exhaustive(const GradedLieWindow& w) {
  CheckItem item{"jacobi", "pass", {}, 0, 0};
  const int n = w.dim();
  auto chunks = chunked_map<JacobiChunk>(n, [&](long long begin,
                                                long long end) {
    JacobiChunk out;
    for (int i = static_cast<int>(begin); i < static_cast<int>(end); ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          std::map<int, Rat> acc;
          bool ok = accumulate_nested(w, w.bracket(i, j), k, acc) &&
                    accumulate_nested(w, w.bracket(j, k), i, acc) &&
                    accumulate_nested(w, w.bracket(k, i), j, acc);
          if (!ok) {
            ++out.unchecked;
            continue;
          }
          ++out.checked;
          for (const auto& [s, v] : acc)
            if (!v.is_zero()) {
              if (out.witnesses.size() < 4)
                out.witnesses.push_back(
                    "J(" + w.basis[static_cast<size_t>(i)].name + "," +
                    w.basis[static_cast<size_t>(j)].name + "," +
                    w.basis[static_cast<size_t>(k)].name +
                    ") has coefficient " + v.str() + " at " +
                    w.basis[static_cast<size_t>(s)].name);
              break;
            }
        }
    return out;
  });
  for (const auto& c : chunks) {
    item.checked_count += c.checked;
    item.unchecked_count += c.unchecked;
    for (const auto& witness : c.witnesses)
      if (item.witnesses.size() < 4) item.fail(witness);
  }
  if (item.status == "pass" && !item.witnesses.empty()) item.status = "fail";
  return item;
}

CheckItem jacobi_sampled(const GradedLieWindow& w, int samples,
                         std::uint64_t seed) {
  CheckItem item{"jacobi sampled", "pass", {}, 0, 0};
  std::vector<int> eligible;
  for (int i = 0; i < w.dim(); ++i) {
    const LoopSymbol& s = w.basis[static_cast<size_t>(i)];
    if (s.role == LoopSymbol::Role::fiber &&
        s.degree.abs() * Rat(3) > w.bound)
      continue;
    eligible.push_back(i);
  }
  if (eligible.empty()) {
    item.status = "skip";
    item.witnesses.emplace_back("no symbols of degree within bound/3");
    return item;
  }
  std::mt19937_64 rng(seed);
  auto random_element = [&] {
    std::map<int, Rat> elem;
    int terms = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < terms; ++t) {
      int sym = eligible[static_cast<size_t>(rng() % eligible.size())];
      long long num = static_cast<long long>(rng() % 7) - 3;
      if (num == 0) num = 1;
      long long den = 1 + static_cast<long long>(rng() % 3);
      elem[sym] += Rat(num, den);
    }
    return elem;
  };
  auto bracket_elem = [&](const std::map<int, Rat>& a,
                          const std::map<int, Rat>& b,
                          std::map<int, Rat>& out) -> bool {
    for (const auto& [i, ci] : a)
      for (const auto& [j, cj] : b) {
        auto terms = w.bracket(i, j);
        if (!terms) return false;
        for (const auto& [s, v] : *terms) out[s] += ci * cj * v;
      }
    return true;
  };
  for (int s = 0; s < samples; ++s) {
    auto x = random_element(), y = random_element(), z = random_element();
    std::map<int, Rat> xy, yz, zx;
    if (!bracket_elem(x, y, xy) || !bracket_elem(y, z, yz) ||
        !bracket_elem(z, x, zx)) {
      ++item.unchecked_count;
      continue;
    }
    std::map<int, Rat> acc;
    bool ok = bracket_elem(xy, z, acc) && bracket_elem(yz, x, acc) &&
              bracket_elem(zx, y, acc);
    if (!ok) {
      ++item.unchecked_count;
      continue;
    }
    ++item.checked_count;
    for (const auto& [sym, v] : acc)
      if (!v.is_zero()) {
        if (item.witnesses.size() < 4)
          item.fail("sample " + std::to_string(s) +
                    ": J is nonzero at symbol " +
                    w.basis[static_cast<size_t>(sym)].name);
        break;
      }
  }
  return item;
}

// ---------------------------------------------------------------------------
// Structure-constant dump

std::string dump_structure_constants(const GradedLieWindow& w) {
  std::string out = "algebra " + w.str() + "\n";
  out += "symbols " + std::to_string(w.dim()) + "\n";
  for (int i = 0; i < w.dim(); ++i) {
    const LoopSymbol& s = w.basis[static_cast<size_t>(i)];
    std::string part = s.role == LoopSymbol::Role::fiber
                           ? w.parts[static_cast<size_t>(s.part)].name
                           : s.name;
    out += std::to_string(i) + " " + s.name + " part=" + part +
           " degree=" + s.degree.str() + " weight=" + s.weight.str() + "\n";
  }
  std::vector<std::string> lines;
  for (int i = 0; i < w.dim(); ++i)
    for (int j = i + 1; j < w.dim(); ++j) {
      auto terms = w.bracket(i, j);
      if (!terms) continue;
      for (const auto& [k, v] : *terms)
        lines.push_back(std::to_string(i) + " " + std::to_string(j) + " " +
                        std::to_string(k) + " " + v.str());
    }
  out += "brackets " + std::to_string(lines.size()) + "\n";
  for (const auto& line : lines) out += line + "\n";
  out += "overflow-pairs " + std::to_string(w.overflow_pairs) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Twisted group algebra and the degree-3 trace identity

TwistedGroupAlgebra::TwistedGroupAlgebra(QSubgroup group, QSubgroup sub,
                                         Cocycle tau)
    : group_(std::move(group)), sub_(std::move(sub)), tau_(std::move(tau)) {}

TwistedGroupAlgebra::Elem TwistedGroupAlgebra::multiply(const Elem& a,
                                                        const Elem& b) const {
  Elem out;
  for (const auto& [g, cg] : a)
    for (const auto& [h, ch] : b) {
      Rat v = tau_.value(g, h) * cg * ch;
      if (!v.is_zero()) out[g + h] += v;
    }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

TwistedGroupAlgebra::Elem TwistedGroupAlgebra::scale(const Elem& a,
                                                     const Rat& c) const {
  Elem out;
  if (c.is_zero()) return out;
  for (const auto& [g, v] : a) out[g] = v * c;
  return out;
}

TwistedGroupAlgebra::Elem TwistedGroupAlgebra::add(const Elem& a,
                                                   const Elem& b) const {
  Elem out = a;
  for (const auto& [g, v] : b) {
    out[g] += v;
    if (out[g].is_zero()) out.erase(g);
  }
  return out;
}

TwistedGroupAlgebra::Elem TwistedGroupAlgebra::tr(const Elem& a) const {
  Elem out;
  for (const auto& [g, v] : a)
    if (sub_.member(g)) out[g] = v;
  return out;
}

bool TwistedGroupAlgebra::is_zero(const Elem& a) { return a.empty(); }

std::string TwistedGroupAlgebra::str(const Elem& a) {
  if (a.empty()) return "0";
  std::string out;
  for (const auto& [g, v] : a) {
    if (!out.empty()) out += " + ";
    out += "(" + v.str() + ")t^" + g.str();
  }
  return out;
}

CheckItem trace_identity_check(const TwistedGroupAlgebra& algebra,
                               const TwistedGroupAlgebra::Elem& x) {
  CheckItem item{"trace identity", "pass", {}, 0, 0};
  using Elem = TwistedGroupAlgebra::Elem;
  const auto& A = algebra;
  Elem x2 = A.multiply(x, x);
  Elem x3 = A.multiply(x2, x);
  Elem t1 = A.tr(x);
  Elem t2 = A.tr(x2);
  Elem t3 = A.tr(x3);

  Elem acc = x3;
  acc = A.add(acc, A.scale(A.multiply(t1, x2), Rat(-3)));
  Elem quadratic = A.add(A.scale(A.multiply(t1, t1), Rat(9, 2)),
                         A.scale(t2, Rat(-3, 2)));
  acc = A.add(acc, A.multiply(quadratic, x));
  acc = A.add(acc, A.scale(t3, Rat(-1)));
  acc = A.add(acc, A.scale(A.multiply(t2, t1), Rat(9, 2)));
  acc = A.add(acc, A.scale(A.multiply(A.multiply(t1, t1), t1), Rat(-9, 2)));

  item.checked_count = 1;
  if (!TwistedGroupAlgebra::is_zero(acc))
    item.fail("cubic residue " + TwistedGroupAlgebra::str(acc) + " for x = " +
              TwistedGroupAlgebra::str(x));
  return item;
}

}  // namespace rf
