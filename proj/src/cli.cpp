#include "rootforge/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rootforge/classify.hpp"
#include "rootforge/lears.hpp"
#include "rootforge/loopalg.hpp"
#include "rootforge/textio.hpp"

namespace rf::cli {
namespace {

Rat parse_rat(const std::string& text) {
  try {
    size_t used = 0;
    size_t slash = text.find('/');
    if (slash == std::string::npos) {
      long long v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Rat(v);
    }
    long long num = std::stoll(text.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument(text);
    long long den = std::stoll(text.substr(slash + 1), &used);
    if (used != text.size() - slash - 1) throw std::invalid_argument(text);
    return Rat(num, den);
  } catch (const std::exception&) {
    throw textio::ParseError("expected a rational number, got '" + text + "'",
                             0);
  }
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp(path + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f)
      throw std::runtime_error("cli: cannot open '" + tmp.string() +
                               "' for writing");
    f << content;
    f.flush();
    if (!f)
      throw std::runtime_error("cli: write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cli: cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Common {
  std::string format = "text";
  std::string out_path;     // artifact redirect
  std::string report_path;  // report file (atomic)
};

void add_common(CLI::App* cmd, Common& c, bool has_artifact) {
  cmd->add_option("--format", c.format, "Report format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  cmd->add_option("--report", c.report_path,
                  "Write the check report to this file (atomically)");
  if (has_artifact)
    cmd->add_option("--out", c.out_path,
                    "Write the artifact to this file (atomically) instead "
                    "of stdout");
}

std::string render(const Report& r, const std::string& format) {
  return format == "structured" ? textio::report_structured(r) : r.text();
}

/// Reports go to --report when given, else to stdout.
void emit_report(const Report& r, const Common& c, std::ostream& out) {
  std::string doc = render(r, c.format);
  if (!c.report_path.empty())
    write_atomic(c.report_path, doc);
  else
    out << doc;
}

/// Artifacts go to --out when given, else to stdout.
void emit_artifact(const std::string& doc, const Common& c,
                   std::ostream& out) {
  if (!c.out_path.empty())
    write_atomic(c.out_path, doc);
  else
    out << doc;
}

Cocycle parse_tau(const std::string& text) {
  if (text == "trivial") return Cocycle::trivial();
  const std::string prefix = "power:";
  if (text.rfind(prefix, 0) == 0)
    return Cocycle::power(parse_rat(text.substr(prefix.size())));
  throw textio::ParseError(
      "expected cocycle 'trivial' or 'power:<rational>', got '" + text + "'",
      0);
}

struct SpecInput {
  LearsSpec spec;
  Rat bound{0};
};

SpecInput resolve_spec(const std::string& spec_line,
                       const std::string& window_s) {
  textio::SpecLine sl = textio::parse_spec_line(spec_line);
  std::optional<Rat> bound = sl.window;
  if (!window_s.empty()) bound = parse_rat(window_s);
  if (!bound)
    throw std::invalid_argument(
        "cli: no window bound given (pass --window or include window= in "
        "the spec line)");
  return {std::move(sl.spec), *bound};
}

int run_construct(const std::string& spec_line, const std::string& window_s,
                  const Common& c, std::ostream& out) {
  SpecInput in = resolve_spec(spec_line, window_s);
  Report validation =
      validate_triple(in.spec.desc, in.spec.group, in.spec.triple);
  validation.set_meta("spec", textio::print_spec_line(in.spec, in.bound));
  if (!validation.ok()) {
    emit_report(validation, c, out);
    return 1;
  }
  LearsWindow w = construct(in.spec, in.bound);
  emit_artifact(textio::print_window(w), c, out);
  if (!c.report_path.empty())
    write_atomic(c.report_path, render(validation, c.format));
  return 0;
}

int run_verify(const std::string& spec_line, const std::string& window_s,
               const std::string& in_path, const Common& c,
               std::ostream& out) {
  Report report;
  if (!in_path.empty()) {
    LearsWindow w = textio::parse_window(read_file(in_path));
    report.set_meta("spec", textio::print_spec_line(w.spec, w.bound));
    report.absorb(verify_window(w), "");
    report.absorb(group_decomposition_check(w), "");
  } else {
    if (spec_line.empty())
      throw std::invalid_argument("cli: verify needs --spec or --in");
    SpecInput in = resolve_spec(spec_line, window_s);
    report = validate_triple(in.spec.desc, in.spec.group, in.spec.triple);
    report.set_meta("spec", textio::print_spec_line(in.spec, in.bound));
    if (report.ok()) {
      LearsWindow w = construct(in.spec, in.bound);
      report.absorb(verify_window(w), "");
      report.absorb(group_decomposition_check(w), "");
    }
  }
  emit_report(report, c, out);
  return report.ok() ? 0 : 1;
}

int run_decompose(const std::string& in_path, const Common& c,
                  std::ostream& out, std::ostream& err) {
  LearsWindow w = textio::parse_window(read_file(in_path));
  Decomposition d = decompose(w);
  std::string artifact;
  if (d.triple) {
    LearsSpec recovered{d.desc, w.spec.group, *d.triple, false};
    recovered.derive_reduced();
    artifact = textio::print_spec_line(recovered, w.bound) + "\n";
  } else {
    artifact = "type=" + d.desc.label() + "\n";
  }
  emit_artifact(artifact, c, out);
  if (!c.report_path.empty())
    write_atomic(c.report_path, render(d.report, c.format));
  else if (!d.report.ok())
    err << render(d.report, c.format);
  return d.report.ok() ? 0 : 1;
}

int run_classify(const std::string& left, const std::string& right,
                 const std::string& window_s, const Common& c,
                 std::ostream& out) {
  SpecInput a = resolve_spec(left, window_s);
  SpecInput b = resolve_spec(right, window_s);
  LearsWindow wa = construct(a.spec, a.bound);
  LearsWindow wb = construct(b.spec, b.bound);
  IsomorphismResult r = isomorphic(wa, wb);
  Report report = r.report;
  report.set_meta("left", textio::print_spec_line(a.spec, a.bound));
  report.set_meta("right", textio::print_spec_line(b.spec, b.bound));
  CheckItem& item = report.add("isomorphic");
  item.checked_count = 1;
  switch (r.verdict) {
    case IsomorphismResult::Verdict::isomorphic:
      if (r.witness) item.witnesses.push_back(r.witness->str());
      if (!r.map_description.empty())
        item.witnesses.push_back(r.map_description);
      break;
    case IsomorphismResult::Verdict::not_isomorphic:
      item.fail(r.detail);
      break;
    case IsomorphismResult::Verdict::undecided:
      item.status = "skip";
      item.witnesses.push_back(r.detail);
      break;
  }
  emit_report(report, c, out);
  return report.ok() ? 0 : 1;
}

int run_similar(const std::string& left, const std::string& right,
                const Common& c, std::ostream& out) {
  textio::SpecLine a = textio::parse_spec_line(left);
  textio::SpecLine b = textio::parse_spec_line(right);
  Report report;
  report.set_meta("left", textio::print_spec_line(a.spec));
  report.set_meta("right", textio::print_spec_line(b.spec));
  CheckItem& item = report.add("similar");
  item.checked_count = 1;
  auto witness = similar(a.spec.group, a.spec.triple, b.spec.group,
                         b.spec.triple);
  if (witness)
    item.witnesses.push_back(witness->str());
  else
    item.fail("no scale and shift identify the triples");
  emit_report(report, c, out);
  return report.ok() ? 0 : 1;
}

int run_enumerate(const std::string& type_s, const std::string& group_s,
                  bool reduced_only, const Common& c, std::ostream& out) {
  RootSystemDesc desc = textio::parse_type_label(type_s);
  QSubgroup group = textio::parse_group(group_s);
  std::string artifact;
  for (const LearsSpec& spec : enumerate_nulldim1(desc, group)) {
    if (reduced_only && !spec.reduced_claim) continue;
    artifact += textio::print_spec_line(spec);
    if (spec.reduced_claim) artifact += " reduced=1";
    artifact += "\n";
  }
  emit_artifact(artifact, c, out);
  return 0;
}

int run_catalog(int index_size, const Common& c, std::ostream& out) {
  std::string artifact;
  for (const CatalogEntry& row : lars_catalog(index_size))
    artifact += row.label + " " + textio::print_spec_line(row.spec) + "\n";
  emit_artifact(artifact, c, out);
  return 0;
}

int run_realize(const std::string& label_s, int index_size,
                const std::string& group_s, const std::string& window_s,
                const std::string& tau_s, const std::string& checks_s,
                bool seed_given, std::uint64_t seed, int samples,
                const std::string& dump_path, const Common& c,
                std::ostream& out) {
  LoopLabel label = LoopLabel::parse(label_s);
  if (index_size <= 0) index_size = label.family == Family::G2 ? 3 : 2;
  QSubgroup group = textio::parse_group(group_s);
  Cocycle tau = parse_tau(tau_s);
  Rat bound = parse_rat(window_s);

  std::set<std::string> checks;
  {
    std::stringstream ss(checks_s);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token.empty()) continue;
      if (token != "jacobi" && token != "roots" && token != "trace")
        throw std::invalid_argument("cli: unknown check '" + token +
                                    "' (expected jacobi, roots, trace)");
      checks.insert(token);
    }
  }

  GradedLieWindow w = build_loop_algebra(label, index_size, group, tau,
                                         bound);
  w = central_extend(w);
  w = add_degree_derivation(w);

  Report report = w.build_report;
  if (checks.count("jacobi"))
    report.items.push_back(seed_given ? jacobi_sampled(w, samples, seed)
                                      : jacobi_exhaustive(w));
  if (checks.count("roots")) report.items.push_back(realization_matches(w));
  if (checks.count("trace")) {
    if (label.twist == 3) {
      TwistedGroupAlgebra algebra(w.group, w.sub, tau);
      TwistedGroupAlgebra::Elem x;
      x[Rat(0)] = Rat(1);
      x[w.group.effective_generator()] = Rat(1);
      report.items.push_back(trace_identity_check(algebra, x));
    } else {
      CheckItem item{"trace identity", "pass", {}, 0, 0};
      item.status = "skip";
      item.witnesses.emplace_back(
          "the cubic identity needs a degree subgroup of index 3");
      report.items.push_back(std::move(item));
    }
  }

  if (!dump_path.empty())
    write_atomic(dump_path, dump_structure_constants(w));
  emit_report(report, c, out);
  return report.ok() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "rootforge: exact construction, verification, classification, and "
      "Lie-algebra realization of extended affine root systems"};
  app.require_subcommand(1);

  std::string spec_line, window_s, in_path, left, right;
  std::string type_s, group_s, label_s, tau_s = "trivial";
  std::string checks_s = "jacobi,roots,trace", dump_path;
  bool reduced_only = false;
  int index_size = 3, realize_index = -1, samples = 50;
  std::uint64_t seed = 0;
  Common c_construct, c_verify, c_decompose, c_classify, c_similar;
  Common c_enumerate, c_catalog, c_realize;

  CLI::App* construct_cmd = app.add_subcommand(
      "construct", "Build a window file from a spec line");
  construct_cmd->add_option("--spec", spec_line, "Spec line")->required();
  construct_cmd->add_option("--window", window_s, "Degree window bound");
  add_common(construct_cmd, c_construct, true);

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Check the axioms on a spec or a window file");
  verify_cmd->add_option("--spec", spec_line, "Spec line");
  verify_cmd->add_option("--window", window_s, "Degree window bound");
  verify_cmd->add_option("--in", in_path, "Window file to verify");
  add_common(verify_cmd, c_verify, false);

  CLI::App* decompose_cmd = app.add_subcommand(
      "decompose", "Recover the spec line from a window file");
  decompose_cmd->add_option("--in", in_path, "Window file")->required();
  add_common(decompose_cmd, c_decompose, true);

  CLI::App* classify_cmd = app.add_subcommand(
      "classify", "Decide isomorphism of two specs at a window bound");
  classify_cmd->add_option("--left", left, "First spec line")->required();
  classify_cmd->add_option("--right", right, "Second spec line")->required();
  classify_cmd->add_option("--window", window_s, "Degree window bound");
  add_common(classify_cmd, c_classify, false);

  CLI::App* similar_cmd = app.add_subcommand(
      "similar", "Decide similarity of two spec triples");
  similar_cmd->add_option("--left", left, "First spec line")->required();
  similar_cmd->add_option("--right", right, "Second spec line")->required();
  add_common(similar_cmd, c_similar, false);

  CLI::App* enumerate_cmd = app.add_subcommand(
      "enumerate", "List the shift triples of one type over one group");
  enumerate_cmd->add_option("--type", type_s, "Type label, e.g. BC2")
      ->required();
  enumerate_cmd->add_option("--group", group_s, "Shift group")->required();
  enumerate_cmd->add_flag("--reduced", reduced_only,
                          "Keep only the reduced entries");
  add_common(enumerate_cmd, c_enumerate, true);

  CLI::App* catalog_cmd = app.add_subcommand(
      "catalog", "List the fourteen affine families at an index size");
  catalog_cmd->add_option("--index", index_size, "Index size")
      ->capture_default_str();
  add_common(catalog_cmd, c_catalog, true);

  CLI::App* realize_cmd = app.add_subcommand(
      "realize", "Build a loop algebra and check it against the catalog");
  realize_cmd->add_option("--label", label_s, "Construction label")
      ->required();
  realize_cmd->add_option("--index", realize_index,
                          "Index size (default: 3 for G2 labels, else 2)");
  realize_cmd->add_option("--group", group_s, "Degree group")->required();
  realize_cmd->add_option("--window", window_s, "Degree window bound")
      ->required();
  realize_cmd->add_option("--tau", tau_s,
                          "Cocycle: trivial or power:<rational>")
      ->capture_default_str();
  realize_cmd->add_option("--check", checks_s,
                          "Comma list from jacobi, roots, trace")
      ->capture_default_str();
  realize_cmd->add_option("--seed", seed,
                          "Sample Jacobi triples with this seed instead of "
                          "exhausting the window");
  realize_cmd->add_option("--samples", samples, "Sample count with --seed")
      ->capture_default_str();
  realize_cmd->add_option("--dump-structure-constants", dump_path,
                          "Write the structure-constant table to this file");
  add_common(realize_cmd, c_realize, false);

  std::vector<const char*> argv;
  argv.push_back("rootforge");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (construct_cmd->parsed())
      return run_construct(spec_line, window_s, c_construct, out);
    if (verify_cmd->parsed())
      return run_verify(spec_line, window_s, in_path, c_verify, out);
    if (decompose_cmd->parsed())
      return run_decompose(in_path, c_decompose, out, err);
    if (classify_cmd->parsed())
      return run_classify(left, right, window_s, c_classify, out);
    if (similar_cmd->parsed()) return run_similar(left, right, c_similar, out);
    if (enumerate_cmd->parsed())
      return run_enumerate(type_s, group_s, reduced_only, c_enumerate, out);
    if (catalog_cmd->parsed()) return run_catalog(index_size, c_catalog, out);
    if (realize_cmd->parsed())
      return run_realize(label_s, realize_index, group_s, window_s, tau_s,
                         checks_s, realize_cmd->count("--seed") > 0, seed,
                         samples, dump_path, c_realize, out);
    err << "cli: no subcommand\n";
    return 2;
  } catch (const textio::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace rf::cli
