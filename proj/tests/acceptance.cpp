// Acceptance suite: one line per criterion, nonzero exit when any fails.
//
// Each criterion body throws std::runtime_error with a witness message on
// the first violated check; the driver prints [PASS]/[FAIL] per criterion.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rootforge/classify.hpp"
#include "rootforge/lears.hpp"
#include "rootforge/loopalg.hpp"
#include "rootforge/octonion.hpp"
#include "rootforge/qgroup.hpp"
#include "rootforge/rootsys.hpp"
#include "rootforge/textio.hpp"

using namespace rf;
using Clock = std::chrono::steady_clock;

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::runtime_error(message);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

LearsSpec spec_of(const std::string& line) {
  return textio::parse_spec_line(line).spec;
}

size_t enum_count(Family f, int n, const QSubgroup& g) {
  return enumerate_nulldim1(RootSystemDesc{f, n}, g).size();
}

// --------------------------------------------------------------------------
// 1. Per-type catalog sizes over the integers, with the reduced filter.

void criterion_catalog_sizes() {
  Clock::time_point start = Clock::now();
  QSubgroup z = QSubgroup::integers();

  struct Row {
    Family family;
    int index;
    size_t count;
  };
  std::vector<Row> rows = {
      {Family::A, 2, 1},  {Family::A, 3, 1},  {Family::A, 5, 1},
      {Family::D, 4, 1},  {Family::D, 5, 1},  {Family::E6, 8, 1},
      // Index-1 B has a single root length, so it counts as simply laced.
      {Family::E7, 8, 1}, {Family::E8, 8, 1}, {Family::B, 1, 1},
      {Family::B, 2, 2},  {Family::B, 4, 2},  {Family::C, 2, 2},
      {Family::C, 3, 2},  {Family::F4, 4, 2}, {Family::G2, 3, 2},
      {Family::BC, 2, 5}, {Family::BC, 3, 5}, {Family::BC, 4, 5},
      {Family::BC, 1, 4},
  };
  for (const Row& row : rows) {
    size_t got = enum_count(row.family, row.index, z);
    require(got == row.count,
            RootSystemDesc{row.family, row.index}.label() + ": expected " +
                std::to_string(row.count) + " triples, got " +
                std::to_string(got));
  }

  // The reduced filter keeps, among the BC entries, exactly the one whose
  // extra-long class is the nontrivial half-period coset.
  for (int n : {1, 2, 3}) {
    auto specs = enumerate_nulldim1(RootSystemDesc{Family::BC, n}, z);
    int reduced = 0;
    for (const LearsSpec& s : specs)
      if (s.reduced_claim) {
        ++reduced;
        require(s.triple.E.has_value() && s.triple.E->period() == 2 &&
                    !s.triple.E->is_pointed(),
                "BC" + std::to_string(n) +
                    ": reduced entry is not the odd coset");
      }
    require(reduced == 1,
            "BC" + std::to_string(n) + ": expected exactly 1 reduced entry");
  }

  double elapsed = seconds_since(start);
  require(elapsed < 1.0,
          "catalog enumeration took " + std::to_string(elapsed) + "s");
}

// --------------------------------------------------------------------------
// 2. The fourteen-family catalog: displayed formulas and windowed axioms.

void criterion_affine_catalog() {
  Clock::time_point start = Clock::now();
  auto entries = lars_catalog(3);
  require(entries.size() == 14, "catalog size " +
                                    std::to_string(entries.size()) +
                                    ", expected 14");

  std::vector<std::pair<std::string, std::string>> formulas = {
      {"A3(1)", "type=A3 group=Z S=G"},
      {"B3(1)", "type=B3 group=Z S=G L=G"},
      {"C3(1)", "type=C3 group=Z S=G L=G"},
      {"D4(1)", "type=D4 group=Z S=G"},
      {"B3(2)", "type=B3 group=Z S=G L=2G+{0}"},
      {"C3(2)", "type=C3 group=Z S=G L=2G+{0}"},
      {"BC3(2)", "type=BC3 group=Z S=G L=G E=2G+{1}"},
  };
  for (const auto& [label, line] : formulas) {
    const CatalogEntry* found = nullptr;
    for (const CatalogEntry& e : entries)
      if (e.label == label) found = &e;
    require(found != nullptr, "catalog is missing " + label);
    LearsSpec want = spec_of(line);
    require(found->spec.desc == want.desc &&
                found->spec.triple == want.triple,
            label + ": triple is " + found->spec.triple.str() +
                ", expected " + want.triple.str());
  }

  for (const CatalogEntry& e : entries) {
    LearsWindow w = construct(e.spec, Rat(3));
    Report r = verify_window(w);
    require(r.ok(), e.label + ": windowed verification failed\n" + r.text());
  }

  double elapsed = seconds_since(start);
  require(elapsed < 10.0,
          "catalog verification took " + std::to_string(elapsed) + "s");
}

// --------------------------------------------------------------------------
// 3. Construct-and-verify on every catalog triple plus randomized triples.

void criterion_construct_verify() {
  for (const CatalogEntry& e : lars_catalog(3)) {
    LearsWindow w = construct(e.spec, Rat(2));
    Report r = verify_window(w);
    require(r.ok(), e.label + ": verification failed\n" + r.text());
  }

  std::mt19937_64 rng(424242);
  std::vector<QSubgroup> groups = {
      QSubgroup::integers(), QSubgroup::cyclic(Rat(2)),
      QSubgroup::cyclic(Rat(3, 2)), QSubgroup::cyclic(Rat(1, 3))};
  for (const CatalogEntry& e : lars_catalog(3)) {
    for (int trial = 0; trial < 20; ++trial) {
      const QSubgroup& g = groups[rng() % groups.size()];
      auto pool = enumerate_nulldim1(e.spec.desc, g);
      require(!pool.empty(), e.label + ": empty randomized pool");
      LearsSpec spec = pool[rng() % pool.size()];
      // Shift the extra-long class by twice a random group element when the
      // result is still a lawful triple (a different representative of the
      // same classified system).
      if (spec.triple.E) {
        Rat s = g.coset_rep(static_cast<long long>(rng() % 3));
        Triple shifted = spec.triple;
        shifted.E = spec.triple.E->shifted(s * Rat(2));
        if (validate_triple(spec.desc, g, shifted).ok()) {
          spec.triple = shifted;
          spec.derive_reduced();
        }
      }
      require(validate_triple(spec.desc, spec.group, spec.triple).ok(),
              e.label + ": randomized triple failed validation: " +
                  spec.str());
      Rat bound = (rng() % 2) ? Rat(2) : Rat(5, 2);
      LearsWindow w = construct(spec, bound);
      Report r = verify_window(w);
      require(r.ok(), e.label + " randomized trial " + std::to_string(trial) +
                          " failed: " + spec.str() + "\n" + r.text());
    }
  }
}

// --------------------------------------------------------------------------
// 4. Shift-choice isomorphisms with witnesses; catalog separation.

void criterion_isomorphism() {
  // (a) Rewriting every non-full class with three different coset
  // representatives yields pairwise isomorphic windows, with witnesses.
  for (const CatalogEntry& e : lars_catalog(3)) {
    std::vector<LearsWindow> windows;
    for (int variant = -1; variant <= 1; ++variant) {
      Triple t = e.spec.triple;
      auto rewrite = [&](const ReflectionSpace& space) {
        if (space.period() == 1) return space;
        std::vector<Rat> reps;
        for (const Rat& r : space.residue_reps())
          reps.push_back(r + space.group().effective_generator() *
                                 Rat(space.period() * variant));
        return ReflectionSpace::cosets(space.group(), space.period(), reps);
      };
      t.S = rewrite(t.S);
      if (t.L) t.L = rewrite(*t.L);
      if (t.E) t.E = rewrite(*t.E);
      LearsSpec spec{e.spec.desc, e.spec.group, t, false};
      spec.derive_reduced();
      windows.push_back(construct(spec, Rat(2)));
    }
    for (size_t i = 0; i < windows.size(); ++i)
      for (size_t j = i + 1; j < windows.size(); ++j) {
        IsomorphismResult r = isomorphic(windows[i], windows[j]);
        require(r.verdict == IsomorphismResult::Verdict::isomorphic,
                e.label + ": representative rewrite not isomorphic: " +
                    r.detail);
        require(r.witness.has_value(), e.label + ": no witness");
      }
  }

  // (a') Genuinely different base choices: shifting the extra-long coset.
  for (const auto& [left, right] :
       std::vector<std::pair<std::string, std::string>>{
           {"type=BC2 group=Z S=G L=2G+{0} E=4G+{0}",
            "type=BC2 group=Z S=G L=2G+{0} E=4G+{2}"},
           {"type=BC1 group=Z S=G E=4G+{0}",
            "type=BC1 group=Z S=G E=4G+{2}"}}) {
    LearsWindow w1 = construct(spec_of(left), Rat(4));
    LearsWindow w2 = construct(spec_of(right), Rat(4));
    IsomorphismResult r = isomorphic(w1, w2);
    require(r.verdict == IsomorphismResult::Verdict::isomorphic,
            left + " vs " + right + ": " + r.detail);
    require(r.witness.has_value() && !r.witness->shift_s.is_zero(),
            left + ": expected a nonzero class shift in the witness");
  }

  // (b) Distinct catalog entries of equal type and group separate, either
  // by invariants or by an exhausted similarity search. No undecideds.
  QSubgroup z = QSubgroup::integers();
  for (auto [family, index] :
       std::vector<std::pair<Family, int>>{{Family::B, 3},
                                           {Family::C, 3},
                                           {Family::F4, 4},
                                           {Family::G2, 3},
                                           {Family::BC, 1},
                                           {Family::BC, 2}}) {
    auto specs = enumerate_nulldim1(RootSystemDesc{family, index}, z);
    std::vector<LearsWindow> windows;
    for (const LearsSpec& s : specs) windows.push_back(construct(s, Rat(4)));
    for (size_t i = 0; i < windows.size(); ++i)
      for (size_t j = i + 1; j < windows.size(); ++j) {
        IsomorphismResult r = isomorphic(windows[i], windows[j]);
        require(r.verdict == IsomorphismResult::Verdict::not_isomorphic,
                specs[i].str() + " vs " + specs[j].str() +
                    ": expected non-isomorphic, got " +
                    (r.verdict == IsomorphismResult::Verdict::isomorphic
                         ? "isomorphic"
                         : "undecided") +
                    " (" + r.detail + ")");
      }
  }
}

// --------------------------------------------------------------------------
// 5. Quotient orders of scaled subgroups, exactly.

void criterion_quotients() {
  require(QSubgroup::integers().quotient_order(2, 1) == 2,
          "Z / 2Z should have order 2");
  require(QSubgroup::prime_inverted(3).quotient_order(2, 1) == 2,
          "Z[1/3] / 2Z[1/3] should have order 2");
  require(QSubgroup::localization(2).quotient_order(2, 1) == 2,
          "Z_(2) / 2Z_(2) should have order 2");
  require(QSubgroup::prime_inverted(2).quotient_order(2, 1) == 1,
          "Z[1/2] / 2Z[1/2] should be trivial");
  require(QSubgroup::prime_inverted(3).quotient_order(2, 2) == 4,
          "Z[1/3] / 4Z[1/3] should have order 4");
}

// --------------------------------------------------------------------------
// 6. Window sum splitting for every catalog window.

void criterion_sum_splitting() {
  for (const CatalogEntry& e : lars_catalog(3)) {
    LearsWindow w = construct(e.spec, Rat(3));
    Report r = group_decomposition_check(w);
    require(r.ok(), e.label + ": sum splitting failed\n" + r.text());
  }
}

// --------------------------------------------------------------------------
// 7. Loop realizations: exact identities and predicted root windows.

void criterion_loop_realizations() {
  Clock::time_point start = Clock::now();

  struct Job {
    LoopLabel label;
    int index;
    bool run_jacobi;
    bool expect_roots;  // false: the size has no classical prediction
  };
  std::vector<Job> jobs = {
      {{Family::A, 1}, 2, true, true},
      {{Family::B, 1}, 1, true, true},
      {{Family::B, 1}, 2, true, true},
      {{Family::C, 1}, 2, true, true},
      {{Family::D, 1}, 2, true, false},  // no finite type at this size
      {{Family::D, 1}, 4, false, true},  // roots only: large fiber
      {{Family::G2, 1}, 3, true, true},
      {{Family::B, 2}, 1, true, true},
      {{Family::B, 2}, 2, true, true},
      {{Family::C, 2}, 1, true, false},  // degenerate second sector
      {{Family::C, 2}, 2, true, true},
      {{Family::BC, 2}, 1, true, true},
      {{Family::BC, 2}, 2, true, true},
      {{Family::G2, 3}, 3, true, true},
  };

  for (const Job& job : jobs) {
    std::string tag = job.label.str() + " at index " +
                      std::to_string(job.index);
    GradedLieWindow w = add_degree_derivation(central_extend(
        build_loop_algebra(job.label, job.index, QSubgroup::integers(),
                           Cocycle::trivial(), Rat(2))));
    require(w.build_report.ok(), tag + ": build report failed\n" +
                                     w.build_report.text());
    const CheckItem* cocy = w.build_report.find("extension cocycle");
    require(cocy != nullptr && cocy->status == "pass",
            tag + ": extension cocycle check failed");

    for (int k = 0; k < w.dim(); ++k) {
      auto b = w.bracket(w.center_index, k);
      require(b.has_value() && b->empty(), tag + ": center is not central");
    }

    if (job.run_jacobi) {
      CheckItem jac = jacobi_exhaustive(w);
      require(jac.status == "pass",
              tag + ": jacobi failed: " +
                  (jac.witnesses.empty() ? "" : jac.witnesses.front()));
      require(jac.checked_count > 0, tag + ": jacobi checked nothing");
    }

    CheckItem roots = realization_matches(w);
    if (job.expect_roots)
      require(roots.status == "pass",
              tag + ": realized roots differ: " +
                  (roots.witnesses.empty() ? "" : roots.witnesses.front()));
    else
      require(roots.status == "skip",
              tag + ": expected no classical prediction at this size");
  }

  double elapsed = seconds_since(start);
  require(elapsed < 300.0,
          "loop realizations took " + std::to_string(elapsed) + "s");
}

// --------------------------------------------------------------------------
// 8. Octonion derivations and the cubic trace identity.

void criterion_octonions() {
  // dim D(O,O) = 14.
  QMat rows;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) {
      QMat d = derivation_dxy(Octonion::unit(i), Octonion::unit(j));
      QVec flat;
      for (const QVec& r : d) flat.insert(flat.end(), r.begin(), r.end());
      rows.push_back(std::move(flat));
    }
  require(rank_of(rows) == 14, "derivation span has the wrong dimension");

  // Leibniz rule for every D over every basis pair.
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) {
      QMat d = derivation_dxy(Octonion::unit(i), Octonion::unit(j));
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
          Octonion lhs =
              apply_map(d, Octonion::unit(a) * Octonion::unit(b));
          Octonion rhs = apply_map(d, Octonion::unit(a)) * Octonion::unit(b) +
                         Octonion::unit(a) * apply_map(d, Octonion::unit(b));
          require(lhs == rhs, "Leibniz fails for D(e" + std::to_string(i) +
                                  ",e" + std::to_string(j) + ") on (e" +
                                  std::to_string(a) + ",e" +
                                  std::to_string(b) + ")");
        }
    }

  // Rank of the rank-two maps on the natural module.
  for (int i : {1, 2, 3}) {
    int n = 2 * i + 1;
    QMat span;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        QVec ea(n, Rat(0)), eb(n, Rat(0));
        ea[a] = Rat(1);
        eb[b] = Rat(1);
        span.push_back(dvv_flat(i, ea, eb));
      }
    require(rank_of(span) == i * (2 * i + 1),
            "rank-two span wrong at index " + std::to_string(i));
  }

  // Cubic trace identity on 100 seeded random elements over the index-3
  // subring.
  TwistedGroupAlgebra alg(QSubgroup::integers(), QSubgroup::cyclic(Rat(3)),
                          Cocycle::trivial());
  std::mt19937_64 rng(314159);
  for (int trial = 0; trial < 100; ++trial) {
    TwistedGroupAlgebra::Elem x;
    int terms = 1 + static_cast<int>(rng() % 4);
    for (int t = 0; t < terms; ++t) {
      long long deg = static_cast<long long>(rng() % 9) - 4;
      long long num = static_cast<long long>(rng() % 11) - 5;
      if (num == 0) num = 3;
      x[Rat(deg)] = Rat(num, 1 + static_cast<long long>(rng() % 4));
    }
    CheckItem item = trace_identity_check(alg, x);
    require(item.status == "pass",
            "trace identity fails on trial " + std::to_string(trial) + ": " +
                (item.witnesses.empty() ? "" : item.witnesses.front()));
  }
}

// --------------------------------------------------------------------------
// 9. Reflectable bases with replayable witness words.

void criterion_reflectable_bases() {
  std::vector<RootSystemDesc> descs;
  for (int n : {2, 3, 4, 5}) descs.push_back({Family::A, n});
  for (int n : {1, 2, 3, 4}) descs.push_back({Family::B, n});
  for (int n : {2, 3, 4}) descs.push_back({Family::C, n});
  descs.push_back({Family::D, 4});
  descs.push_back({Family::F4, 4});
  descs.push_back({Family::G2, 3});

  for (const RootSystemDesc& desc : descs) {
    RootSystem sys = generate(desc);
    ReflectableBase rb = reflectable_base(sys);
    require(static_cast<int>(rb.base.size()) == desc.rank(),
            desc.label() + ": base size is not the rank");
    require(rb.words.size() == sys.roots.size(),
            desc.label() + ": missing witness words");
    for (size_t i = 0; i < sys.roots.size(); ++i) {
      RootVector replayed = replay_word(rb.base, rb.words[i]);
      require(replayed == sys.roots[i],
              desc.label() + ": word " + std::to_string(i) +
                  " replays to the wrong root");
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* summary;
    std::function<void()> body;
  };
  std::vector<Criterion> criteria = {
      {1, "per-type catalog sizes and the reduced filter",
       criterion_catalog_sizes},
      {2, "fourteen-family catalog formulas and windowed axioms",
       criterion_affine_catalog},
      {3, "construct-and-verify on catalog and randomized triples",
       criterion_construct_verify},
      {4, "shift-choice isomorphisms and catalog separation",
       criterion_isomorphism},
      {5, "quotient orders of scaled subgroups", criterion_quotients},
      {6, "window sum splitting", criterion_sum_splitting},
      {7, "loop realizations with exact identities",
       criterion_loop_realizations},
      {8, "octonion derivations and the cubic trace identity",
       criterion_octonions},
      {9, "reflectable bases with replayable words",
       criterion_reflectable_bases},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Clock::time_point start = Clock::now();
    std::string verdict = "PASS";
    std::string note;
    try {
      c.body();
    } catch (const std::exception& e) {
      verdict = "FAIL";
      note = e.what();
      ++failures;
    }
    std::ostringstream line;
    line << "[" << verdict << "] criterion " << c.number << ": " << c.summary
         << " (" << std::fixed;
    line.precision(2);
    line << seconds_since(start) << "s)";
    if (!note.empty()) line << "\n    " << note;
    std::puts(line.str().c_str());
  }
  return failures == 0 ? 0 : 1;
}
