#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rootforge/cli.hpp"
#include "rootforge/lears.hpp"
#include "rootforge/textio.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = rf::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

size_t line_count(const std::string& s) {
  size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

fs::path temp_file(const std::string& tag) {
  static int counter = 0;
  return fs::temp_directory_path() /
         ("rootforge_cli_" + tag + "_" + std::to_string(counter++) + ".txt");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("help and usage errors use the documented exit codes") {
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({"enumerate", "--help"}).code == 0);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({}).code == 2);
  RunResult bad_group =
      run_cli({"enumerate", "--type", "B2", "--group", "Q"});
  CHECK(bad_group.code == 2);
  CHECK(bad_group.err.find("error") != std::string::npos);
  CHECK(run_cli({"enumerate", "--type", "Z9", "--group", "Z"}).code == 2);
  CHECK(run_cli({"catalog", "--index", "not-a-number"}).code == 2);
}

TEST_CASE("enumerate lists the classified triples with the reduced marker") {
  RunResult r = run_cli({"enumerate", "--type", "BC2", "--group", "Z"});
  REQUIRE(r.code == 0);
  CHECK(line_count(r.out) == 5);
  CHECK(r.out.find("reduced=1") != std::string::npos);

  RunResult reduced =
      run_cli({"enumerate", "--type", "BC2", "--group", "Z", "--reduced"});
  REQUIRE(reduced.code == 0);
  CHECK(line_count(reduced.out) == 1);
  CHECK(reduced.out.find("E=2G+{1}") != std::string::npos);

  RunResult collapsed =
      run_cli({"enumerate", "--type", "B3", "--group", "Zinv(2)"});
  REQUIRE(collapsed.code == 0);
  CHECK(line_count(collapsed.out) == 1);
}

TEST_CASE("catalog prints one line per affine family") {
  RunResult r = run_cli({"catalog", "--index", "3"});
  REQUIRE(r.code == 0);
  CHECK(line_count(r.out) == 14);
  CHECK(r.out.find("BC3(2)") != std::string::npos);
  CHECK(r.out.find("G2(3)") != std::string::npos);
}

TEST_CASE("construct, verify, and decompose round trip through files") {
  fs::path window_path = temp_file("window");
  fs::path spec_path = temp_file("spec");
  std::string spec = "type=BC2 group=Z S=G L=G E=2G+{1}";

  RunResult c = run_cli({"construct", "--spec", spec, "--window", "2", "--out",
                         window_path.string()});
  REQUIRE(c.code == 0);
  CHECK(fs::exists(window_path));

  RunResult v = run_cli({"verify", "--in", window_path.string()});
  CHECK(v.code == 0);
  CHECK(v.out.find("[PASS]") != std::string::npos);

  RunResult d = run_cli({"decompose", "--in", window_path.string(), "--out",
                         spec_path.string()});
  REQUIRE(d.code == 0);
  std::string recovered = slurp(spec_path);
  if (!recovered.empty() && recovered.back() == '\n') recovered.pop_back();
  rf::LearsSpec back = rf::textio::parse_spec_line(recovered).spec;
  rf::LearsSpec orig = rf::textio::parse_spec_line(spec).spec;
  CHECK(back.desc == orig.desc);
  CHECK(back.triple == orig.triple);

  fs::remove(window_path);
  fs::remove(spec_path);
}

TEST_CASE("verify rejects invalid triples and unreadable windows") {
  RunResult bad = run_cli(
      {"verify", "--spec", "type=B3 group=Z S=G L=3G+{0}", "--window", "2"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("[FAIL]") != std::string::npos);

  fs::path garbage = temp_file("garbage");
  std::ofstream(garbage) << "not a window file\n";
  CHECK(run_cli({"verify", "--in", garbage.string()}).code == 2);
  fs::remove(garbage);
}

TEST_CASE("construct validates before writing anything") {
  fs::path out = temp_file("never");
  RunResult r = run_cli({"construct", "--spec", "type=A3 group=Z S=2G+{0}",
                         "--window", "2", "--out", out.string()});
  CHECK(r.code == 1);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("classify distinguishes the catalog pairs") {
  RunResult iso = run_cli({"classify", "--left", "type=B2 group=Z S=G L=2G+{0}",
                           "--right", "type=C2 group=Z S=G L=2G+{0}",
                           "--window", "2"});
  CHECK(iso.code == 0);
  CHECK(iso.out.find("[PASS] isomorphic") != std::string::npos);

  RunResult diff = run_cli({"classify", "--left", "type=B3 group=Z S=G L=G",
                            "--right", "type=B3 group=Z S=G L=2G+{0}",
                            "--window", "2"});
  CHECK(diff.code == 1);
}

TEST_CASE("similar decides triple similarity from spec lines") {
  RunResult yes = run_cli(
      {"similar", "--left", "type=BC1 group=Z S=G E=4G+{0}", "--right",
       "type=BC1 group=Z S=G E=4G+{2}"});
  CHECK(yes.code == 0);
  CHECK(yes.out.find("scale=") != std::string::npos);

  RunResult no = run_cli(
      {"similar", "--left", "type=BC2 group=Z S=G L=2G+{0} E=2G+{0}",
       "--right", "type=BC2 group=Z S=G L=2G+{0} E=4G+{0}"});
  CHECK(no.code == 1);
}

TEST_CASE("structured reports parse as the versioned document") {
  RunResult r = run_cli({"verify", "--spec", "type=B2 group=Z S=G L=2G+{0}",
                         "--window", "2", "--format", "structured"});
  REQUIRE(r.code == 0);
  nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("schema_version").get<int>() == 1);
  CHECK(doc.at("ok").get<bool>() == true);
  REQUIRE(doc.at("items").is_array());
  CHECK(doc.at("items").size() > 0);
  for (const auto& item : doc.at("items")) {
    CHECK(item.contains("axiom"));
    CHECK(item.contains("status"));
  }
}

TEST_CASE("reports can be routed to a file") {
  fs::path report_path = temp_file("report");
  RunResult r = run_cli({"verify", "--spec", "type=A3 group=Z S=G", "--window",
                         "2", "--report", report_path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::string report = slurp(report_path);
  CHECK(report.find("[PASS]") != std::string::npos);
  fs::remove(report_path);
}

TEST_CASE("realize runs the construction pipeline end to end") {
  RunResult r = run_cli({"realize", "--label", "A", "--index", "2", "--group",
                         "Z", "--window", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("jacobi") != std::string::npos);

  RunResult twisted = run_cli({"realize", "--label", "G2(3)", "--group", "Z",
                               "--window", "1"});
  CHECK(twisted.code == 0);
  CHECK(twisted.out.find("trace identity") != std::string::npos);
}

TEST_CASE("sampled realization output is reproducible for a fixed seed") {
  std::vector<std::string> args = {"realize", "--label", "B",    "--index",
                                   "2",       "--group", "Z",    "--window",
                                   "2",       "--seed",  "41",   "--samples",
                                   "6"};
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("structure constants dump to a file on request") {
  fs::path dump = temp_file("dump");
  RunResult r = run_cli({"realize", "--label", "A", "--index", "2", "--group",
                         "Z", "--window", "1", "--check", "jacobi",
                         "--dump-structure-constants", dump.string()});
  REQUIRE(r.code == 0);
  std::string text = slurp(dump);
  CHECK_FALSE(text.empty());
  fs::remove(dump);
}

TEST_CASE("unknown check names are rejected") {
  RunResult r = run_cli({"realize", "--label", "A", "--index", "2", "--group",
                         "Z", "--window", "1", "--check", "jacobi,bogus"});
  CHECK(r.code == 2);
}
