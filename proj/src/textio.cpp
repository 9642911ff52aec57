#include "rootforge/textio.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rf {

// --- Report methods (rendering lives here with the other text code) -------

bool Report::ok() const {
  for (const auto& it : items)
    if (it.status == "fail") return false;
  return true;
}

CheckItem& Report::add(std::string axiom) {
  items.push_back(CheckItem{std::move(axiom), "pass", {}, 0, 0});
  return items.back();
}

const CheckItem* Report::find(std::string_view axiom) const {
  for (const auto& it : items)
    if (it.axiom == axiom) return &it;
  return nullptr;
}

void Report::set_meta(std::string key, std::string value) {
  for (auto& [k, v] : meta)
    if (k == key) {
      v = std::move(value);
      return;
    }
  meta.emplace_back(std::move(key), std::move(value));
}

const std::string* Report::get_meta(std::string_view key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return &v;
  return nullptr;
}

void Report::absorb(const Report& other, const std::string& prefix) {
  for (const auto& it : other.items) {
    CheckItem copy = it;
    copy.axiom = prefix + copy.axiom;
    items.push_back(std::move(copy));
  }
  for (const auto& [k, v] : other.meta) set_meta(prefix + k, v);
}

std::string Report::text() const {
  std::ostringstream out;
  for (const auto& [k, v] : meta) out << "# " << k << " = " << v << "\n";
  for (const auto& it : items) {
    std::string tag = it.status == "pass"   ? "PASS"
                      : it.status == "fail" ? "FAIL"
                                            : "SKIP";
    out << "[" << tag << "] " << it.axiom << " (checked " << it.checked_count
        << ", unchecked " << it.unchecked_count << ")\n";
    for (const auto& w : it.witnesses) out << "    witness: " << w << "\n";
  }
  return out.str();
}

}  // namespace rf

namespace rf::textio {

namespace {

struct Cursor {
  std::string_view s;
  size_t pos = 0;

  bool eof() const { return pos >= s.size(); }
  char peek() const { return eof() ? '\0' : s[pos]; }

  void skip_ws() {
    while (!eof() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c))
      throw ParseError(std::string("expected '") + c + "'", pos);
  }

  bool consume_word(std::string_view w) {
    if (s.substr(pos, w.size()) == w) {
      pos += w.size();
      return true;
    }
    return false;
  }

  long long integer() {
    size_t start = pos;
    bool neg = consume('-');
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("expected integer", pos);
    long long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (s[pos] - '0');
      if (v < 0) throw ParseError("integer overflow", start);
      ++pos;
    }
    return neg ? -v : v;
  }

  Rat rational() {
    long long n = integer();
    if (consume('/')) {
      long long d = integer();
      if (d == 0) throw ParseError("expected nonzero denominator", pos);
      return Rat(n, d);
    }
    return Rat(n);
  }

  void expect_end() {
    skip_ws();
    if (!eof()) throw ParseError("expected end of input", pos);
  }
};

// Runs a constructor that validates its arguments and converts any rejection
// into a ParseError anchored at the argument's position in the input.
template <class F>
auto semantic(size_t pos, F&& make) -> decltype(make()) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), pos);
  }
}

QSubgroup parse_group_at(Cursor& c) {
  c.skip_ws();
  if (c.consume('0')) return QSubgroup::cyclic(Rat(0));
  if (c.consume_word("Zloc(")) {
    size_t at = c.pos;
    long long p = c.integer();
    c.expect(')');
    return semantic(at, [&] { return QSubgroup::localization(p); });
  }
  if (c.consume_word("Zinv(")) {
    size_t at = c.pos;
    long long q = c.integer();
    c.expect(')');
    return semantic(at, [&] { return QSubgroup::prime_inverted(q); });
  }
  if (c.consume_word("trunc(")) {
    size_t at = c.pos;
    QSubgroup inner = parse_group_at(c);
    c.expect(',');
    long long depth = c.integer();
    c.expect(')');
    return semantic(at, [&] { return inner.truncated(depth); });
  }
  if (c.consume('Z')) {
    if (c.consume('*')) return QSubgroup::cyclic(c.rational());
    return QSubgroup::integers();
  }
  throw ParseError("expected group (Z, Z*<q>, Zloc(p), Zinv(q), trunc, 0)",
                   c.pos);
}

ReflectionSpace parse_space_at(Cursor& c, const QSubgroup& group) {
  c.skip_ws();
  size_t at = c.pos;
  if (c.peek() == 'G') {
    ++c.pos;
    return ReflectionSpace::full_group(group);
  }
  long long k = c.integer();
  if (k <= 0) throw ParseError("expected positive period", c.pos);
  c.expect('G');
  std::vector<Rat> reps;
  if (c.consume('+')) {
    c.expect('{');
    if (!c.consume('}')) {
      reps.push_back(c.rational());
      while (c.consume(',')) reps.push_back(c.rational());
      c.expect('}');
    }
  } else {
    reps.push_back(Rat(0));
  }
  return semantic(at, [&] { return ReflectionSpace::cosets(group, k, reps); });
}

std::vector<Coord> parse_coord_block(Cursor& c) {
  std::vector<Coord> coords;
  c.expect('{');
  if (c.consume('}')) return coords;
  for (;;) {
    long long idx = c.integer();
    c.expect(':');
    Rat v = c.rational();
    coords.emplace_back(static_cast<int>(idx), v);
    if (!c.consume(',')) break;
  }
  c.expect('}');
  return coords;
}

}  // namespace

QSubgroup parse_group(std::string_view text) {
  Cursor c{text};
  QSubgroup g = parse_group_at(c);
  c.expect_end();
  return g;
}

ReflectionSpace parse_reflection_space(std::string_view text,
                                       const QSubgroup& group) {
  Cursor c{text};
  ReflectionSpace s = parse_space_at(c, group);
  c.expect_end();
  return s;
}

RootSystemDesc parse_type_label(std::string_view text) {
  Cursor c{text};
  c.skip_ws();
  size_t start = c.pos;
  std::string letters;
  while (std::isalpha(static_cast<unsigned char>(c.peek()))) {
    letters += c.peek();
    ++c.pos;
  }
  RootSystemDesc d{};
  bool numbered = true;
  if (letters == "A") d.family = Family::A;
  else if (letters == "B") d.family = Family::B;
  else if (letters == "C") d.family = Family::C;
  else if (letters == "D") d.family = Family::D;
  else if (letters == "BC") d.family = Family::BC;
  else if (letters == "E") {
    long long n = c.integer();
    if (n == 6) d.family = Family::E6;
    else if (n == 7) d.family = Family::E7;
    else if (n == 8) d.family = Family::E8;
    else throw ParseError("expected E6, E7, or E8", start);
    d.index_size = 8;
    numbered = false;
  } else if (letters == "F") {
    if (c.integer() != 4) throw ParseError("expected F4", start);
    d.family = Family::F4;
    d.index_size = 4;
    numbered = false;
  } else if (letters == "G") {
    if (c.integer() != 2) throw ParseError("expected G2", start);
    d.family = Family::G2;
    d.index_size = 3;
    numbered = false;
  } else {
    throw ParseError("expected type letter (A, B, C, D, BC, E, F, G)", start);
  }
  if (numbered) d.index_size = static_cast<int>(c.integer());
  c.expect_end();
  if (!d.valid())
    throw ParseError("inadmissible index for family " + to_string(d.family),
                     start);
  return d;
}

SpecLine parse_spec_line(std::string_view line) {
  // Tokenize key=value pairs first, then resolve in dependency order.
  std::map<std::string, std::pair<std::string, size_t>> kv;
  size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    std::string token(line.substr(start, pos - start));
    size_t eq = token.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value token", start);
    std::string key = token.substr(0, eq);
    if (kv.count(key)) throw ParseError("duplicate key '" + key + "'", start);
    kv[key] = {token.substr(eq + 1), start + eq + 1};
  }
  auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, size_t>> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };
  auto reposition = [](const ParseError& e, size_t offset) {
    return ParseError(
        std::string(e.what()).substr(0, std::string(e.what()).rfind(" at position ")),
        offset + e.position());
  };

  auto type_tok = take("type");
  if (!type_tok) throw ParseError("expected type=<label>", 0);
  auto group_tok = take("group");
  if (!group_tok) throw ParseError("expected group=<group>", 0);
  auto s_tok = take("S");
  if (!s_tok) throw ParseError("expected S=<reflection space>", 0);

  SpecLine out{LearsSpec{RootSystemDesc{}, QSubgroup::integers(),
                         Triple{ReflectionSpace::full_group(QSubgroup::integers()),
                                std::nullopt, std::nullopt},
                         false},
               std::nullopt};
  try {
    out.spec.desc = parse_type_label(type_tok->first);
  } catch (const ParseError& e) {
    throw reposition(e, type_tok->second);
  }
  try {
    out.spec.group = parse_group(group_tok->first);
  } catch (const ParseError& e) {
    throw reposition(e, group_tok->second);
  }
  auto space = [&](const std::pair<std::string, size_t>& tok) {
    try {
      return parse_reflection_space(tok.first, out.spec.group);
    } catch (const ParseError& e) {
      throw reposition(e, tok.second);
    }
  };
  out.spec.triple.S = space(*s_tok);
  if (auto l = take("L")) out.spec.triple.L = space(*l);
  if (auto e = take("E")) out.spec.triple.E = space(*e);
  if (auto w = take("window")) {
    Cursor c{w->first};
    try {
      out.window = c.rational();
      c.expect_end();
    } catch (const ParseError& e) {
      throw reposition(e, w->second);
    }
  }
  if (auto r = take("reduced")) {
    if (r->first == "1" || r->first == "true") out.spec.reduced_claim = true;
    else if (r->first == "0" || r->first == "false")
      out.spec.reduced_claim = false;
    else throw ParseError("expected reduced=0|1", r->second);
  } else {
    out.spec.derive_reduced();
  }
  if (!kv.empty())
    throw ParseError("unknown key '" + kv.begin()->first + "'",
                     kv.begin()->second.second);
  return out;
}

std::string print_spec_line(const LearsSpec& spec,
                            const std::optional<Rat>& window) {
  std::string out = "type=" + spec.desc.label() + " group=" + spec.group.str() +
                    " S=" + spec.triple.S.str();
  if (spec.triple.L) out += " L=" + spec.triple.L->str();
  if (spec.triple.E) out += " E=" + spec.triple.E->str();
  if (window) out += " window=" + window->str();
  return out;
}

RootVector parse_root_line(std::string_view line) {
  Cursor c{line};
  c.skip_ws();
  if (!c.consume_word("eps:")) throw ParseError("expected 'eps:'", c.pos);
  auto eps = parse_coord_block(c);
  c.skip_ws();
  if (!c.consume_word("nulls:")) throw ParseError("expected 'nulls:'", c.pos);
  auto nulls = parse_coord_block(c);
  c.expect_end();
  return RootVector(eps, nulls);
}

std::string print_window(const LearsWindow& window) {
  std::string out =
      "spec " + print_spec_line(window.spec, window.bound) + "\n";
  for (const auto& r : window.roots) out += r.str() + "\n";
  return out;
}

LearsWindow parse_window(std::string_view text) {
  LearsWindow w{LearsSpec{RootSystemDesc{}, QSubgroup::integers(),
                          Triple{ReflectionSpace::full_group(QSubgroup::integers()),
                                 std::nullopt, std::nullopt},
                          false},
                Rat(0),
                {},
                1};
  size_t line_start = 0;
  bool have_spec = false;
  while (line_start < text.size()) {
    size_t eol = text.find('\n', line_start);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(line_start, eol - line_start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      if (!have_spec) {
        if (line.substr(0, 5) != "spec ")
          throw ParseError("expected 'spec ' header line", line_start);
        SpecLine sl = parse_spec_line(line.substr(5));
        if (!sl.window)
          throw ParseError("expected window=<bound> in header", line_start);
        w.spec = sl.spec;
        w.bound = *sl.window;
        have_spec = true;
      } else {
        w.roots.push_back(parse_root_line(line));
      }
    }
    line_start = eol + 1;
  }
  if (!have_spec) throw ParseError("expected 'spec ' header line", 0);
  std::sort(w.roots.begin(), w.roots.end());
  w.roots.erase(std::unique(w.roots.begin(), w.roots.end()), w.roots.end());
  int nd = 1;
  for (const auto& r : w.roots)
    for (const auto& [j, v] : r.nulls()) nd = std::max(nd, j);
  w.null_dim = nd;
  return w;
}

std::string report_structured(const Report& report) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["ok"] = report.ok();
  doc["items"] = nlohmann::ordered_json::array();
  for (const auto& it : report.items) {
    nlohmann::ordered_json item;
    item["axiom"] = it.axiom;
    item["status"] = it.status;
    item["witnesses"] = it.witnesses;
    item["checked_count"] = it.checked_count;
    item["unchecked_count"] = it.unchecked_count;
    doc["items"].push_back(std::move(item));
  }
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.meta) meta[k] = v;
  doc["meta"] = std::move(meta);
  return doc.dump(2) + "\n";
}

}  // namespace rf::textio
