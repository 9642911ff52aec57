#include <doctest.h>

#include "rootforge/lears.hpp"
#include "rootforge/textio.hpp"

using namespace rf;
using namespace rf::textio;

TEST_CASE("group grammar round trips") {
  for (const char* s : {"Z", "Z*3", "Z*3/2", "Zloc(5)", "Zinv(2)", "0"}) {
    QSubgroup g = parse_group(s);
    CHECK(g.str() == s);
    CHECK(parse_group(g.str()).same_set(g));
  }
  CHECK(parse_group("Z*2").same_set(QSubgroup::integers().scaled(2)));
}

TEST_CASE("group grammar rejects malformed input with a position") {
  CHECK_THROWS_AS(parse_group("Q"), ParseError);
  CHECK_THROWS_AS(parse_group("Zloc(4)"), ParseError);  // 4 is not prime
  CHECK_THROWS_AS(parse_group("Z*"), ParseError);
  try {
    parse_group("Zloc(x)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("reflection space grammar round trips") {
  QSubgroup z = QSubgroup::integers();
  for (const char* s : {"G", "2G+{0}", "2G+{1}", "4G+{1,2}"}) {
    ReflectionSpace r = parse_reflection_space(s, z);
    CHECK(r.str() == s);
  }
  CHECK(parse_reflection_space("G", z) == ReflectionSpace::full_group(z));
  CHECK_THROWS_AS(parse_reflection_space("2G+{0,2}", z), ParseError);
  CHECK_THROWS_AS(parse_reflection_space("G+", z), ParseError);
}

TEST_CASE("type labels") {
  RootSystemDesc a = parse_type_label("A3");
  CHECK(a.family == Family::A);
  CHECK(a.index_size == 3);
  CHECK(a.label() == "A3");
  RootSystemDesc bc = parse_type_label("BC1");
  CHECK(bc.family == Family::BC);
  CHECK(bc.index_size == 1);
  CHECK(parse_type_label("E7").family == Family::E7);
  CHECK_THROWS_AS(parse_type_label("H4"), ParseError);
  CHECK_THROWS_AS(parse_type_label("B"), ParseError);
}

TEST_CASE("spec lines round trip") {
  const std::string line = "type=BC2 group=Z S=G L=2G+{0} E=4G+{2}";
  SpecLine sl = parse_spec_line(line);
  CHECK_FALSE(sl.window.has_value());
  CHECK(print_spec_line(sl.spec) == line);

  SpecLine with_window = parse_spec_line(line + " window=7/2");
  REQUIRE(with_window.window.has_value());
  CHECK(*with_window.window == Rat(7, 2));
  CHECK(print_spec_line(with_window.spec, with_window.window) ==
        line + " window=7/2");

  SpecLine reduced = parse_spec_line("type=A2 group=Z S=G reduced=1");
  CHECK(reduced.spec.reduced_claim);
  CHECK_THROWS_AS(parse_spec_line("type=A2 S=G"), ParseError);
  CHECK_THROWS_AS(parse_spec_line("group=Z S=G"), ParseError);
}

TEST_CASE("root lines round trip") {
  RootVector r = RootVector::eps_unit(1) - RootVector::eps_unit(3) +
                 RootVector::null_unit(1, Rat(-5, 2));
  RootVector back = parse_root_line(r.str());
  CHECK(back == r);
  CHECK_THROWS_AS(parse_root_line("eps:{1:1}"), ParseError);
}

TEST_CASE("window files round trip") {
  SpecLine sl = parse_spec_line("type=B2 group=Z S=G L=2G+{0}");
  LearsWindow w = construct(sl.spec, Rat(2));
  std::string text = print_window(w);
  LearsWindow back = parse_window(text);
  CHECK(back.roots == w.roots);
  CHECK(back.bound == w.bound);
  CHECK(back.spec.desc == w.spec.desc);
  CHECK(print_window(back) == text);
}

TEST_CASE("structured report document is stable (schema version 1)") {
  Report r;
  r.set_meta("spec", "type=A2 group=Z S=G");
  CheckItem& a = r.add("A1");
  a.checked_count = 4;
  CheckItem& b = r.add("A3");
  b.fail("missing reflection image");
  b.checked_count = 2;
  b.unchecked_count = 1;

  const std::string expected = R"({
  "schema_version": 1,
  "ok": false,
  "items": [
    {
      "axiom": "A1",
      "status": "pass",
      "witnesses": [],
      "checked_count": 4,
      "unchecked_count": 0
    },
    {
      "axiom": "A3",
      "status": "fail",
      "witnesses": [
        "missing reflection image"
      ],
      "checked_count": 2,
      "unchecked_count": 1
    }
  ],
  "meta": {
    "spec": "type=A2 group=Z S=G"
  }
}
)";
  CHECK(report_structured(r) == expected);
}

TEST_CASE("report text rendering lists items and witnesses") {
  Report r;
  r.set_meta("k", "v");
  CheckItem& item = r.add("demo");
  item.fail("w1");
  std::string text = r.text();
  CHECK(text.find("# k = v") != std::string::npos);
  CHECK(text.find("[FAIL] demo") != std::string::npos);
  CHECK(text.find("witness: w1") != std::string::npos);
  CHECK_FALSE(r.ok());
}
