#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "freeact/commands.hpp"
#include "support.hpp"

using namespace freeact;
using namespace freeact::testing;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("freeact_test_" + name)).string();
}

RunConfig small_config() {
  RunConfig cfg;
  cfg.rounds = 4;
  cfg.cert_depth = 6;
  cfg.ball_radius = 3;
  cfg.rmax = 4;
  cfg.samples = 200;
  return cfg;
}

}  // namespace

TEST_CASE("config parsing is strict") {
  const RunConfig c = parse_config(
      "# comment\n[oracle]\nkind = dlo\nseed = 4\n\n[build]\nrounds=3\n[spectra]\ntol = 1e-11\n[output]\npair = x.pair\n");
  CHECK(c.oracle.kind == OracleKind::DenseLinearOrder);
  CHECK(c.oracle.level == default_level(OracleKind::DenseLinearOrder));
  CHECK(c.oracle.seed == 4);
  CHECK(c.rounds == 3);
  CHECK(c.tol == 1e-11);
  CHECK(c.pair == "x.pair");
  CHECK_THROWS_AS(parse_config("[oracle]\ncolour = red\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[plots]\n"), ParseError);
  CHECK_THROWS_AS(parse_config("kind = dlo\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[build]\nrounds = -1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[build]\nrounds = 2x\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[spectra]\ntol = small\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[oracle]\nkind = hypergraph\n"), ParseError);
}

TEST_CASE("an explicit level survives a later kind change") {
  const RunConfig c = parse_config("[oracle]\nlevel = 3\nkind = pure-set\n");
  CHECK(c.oracle.level == 3);
}

TEST_CASE("validation requires positive numerics except rounds") {
  RunConfig c;
  c.rounds = 0;
  CHECK_NOTHROW(validate(c));
  c.cert_depth = 0;
  CHECK_THROWS_AS(validate(c), ParseError);
  c = RunConfig{};
  c.tol = 0;
  CHECK_THROWS_AS(validate(c), ParseError);
  c = RunConfig{};
  c.oracle.seed = 0;
  CHECK_THROWS_AS(validate(c), ParseError);
}

TEST_CASE("reports carry tolerances and a status line") {
  Report r("demo");
  r.set_config({{"a", "1"}});
  r.check("first", true, {{"x", "2"}}, "1e-09");
  r.row("table", {{"k", "3"}}, "exact");
  r.set_seconds(1.25);
  const std::string text = r.render();
  CHECK(text ==
        "report demo\nversion freeact 0.1.0 format REPORT/1\nconfig a=1\n"
        "check first PASS x=2 tol=1e-09\nrow table k=3 tol=exact\ntiming seconds=1.250\n"
        "status PASS checks=1 failed=0\n");
  CHECK(r.passed());
  r.check("second", false, {});
  CHECK_FALSE(r.passed());
  CHECK(exit_code_for(r) == kExitCheckFailed);
  const auto lines = check_lines(r.render());
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].first == "second");
}

TEST_CASE("pair files round-trip and reject damage") {
  PairArtifact a;
  a.oracle.kind = OracleKind::PureSet;
  a.oracle.level = 30;
  a.journal = {JournalEntry{JournalEntry::Kind::Grow, 30, {}, {}},
               JournalEntry{JournalEntry::Kind::Construct, 0, {1, 2}, {1, 1}}};
  a.pair.phi = PartialAutomorphism(std::vector<Element>{0, 5}, std::vector<Element>{1, 6});
  a.pair.gamma = PartialAutomorphism(std::vector<Element>{2}, std::vector<Element>{3});
  a.steps = {ExtensionRecord{Side::Phi, Direction::Domain, 1, 1, 2, 30, true}};
  a.certification = {"check types PASS tol=exact"};
  const std::string text = write_pair(a);
  const PairArtifact b = read_pair(text);
  CHECK(write_pair(b) == text);
  CHECK(b.journal == a.journal);
  CHECK(b.pair.phi == a.pair.phi);
  CHECK(b.steps == a.steps);

  CHECK_THROWS_AS(read_pair(text.substr(0, text.size() - 4)), ParseError);
  CHECK_THROWS_AS(read_pair(""), ParseError);
  CHECK_THROWS_AS(read_pair("FREEPAIR/2\n"), ParseError);
  std::string garbled = text;
  garbled.replace(garbled.find("phi 5 6"), 7, "phi 5 x");
  CHECK_THROWS_AS(read_pair(garbled), ParseError);
  std::string swapped = text;
  swapped.replace(swapped.find("gamma 2 3"), 9, "gamma 2 1");
  CHECK_NOTHROW(read_pair(swapped));  // still a bijection; certification catches it
  std::string clash = text;
  clash.replace(clash.find("phi 5 6"), 7, "phi 5 1");
  CHECK_THROWS_AS(read_pair(clash), ParseError);
}

TEST_CASE("build, persist and verify round-trip bit for bit") {
  RunConfig cfg = small_config();
  cfg.pair = temp_path("roundtrip.pair");
  const Report built = cmd_build(cfg);
  CHECK(built.passed());
  const Report again = cmd_build(cfg);
  CHECK(built.render(false) == again.render(false));

  const Report verified = cmd_verify(cfg);
  CHECK(verified.passed());
  const CheckResult* rt = verified.find("roundtrip");
  REQUIRE(rt != nullptr);
  CHECK(rt->pass);
  const auto a = check_lines(built.render(false));
  const auto b = check_lines(verified.render(false));
  REQUIRE(b.size() == a.size() + 1);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  std::remove(cfg.pair.c_str());
}

TEST_CASE("verify reports a tampered mapping as a type failure") {
  RunConfig cfg = small_config();
  cfg.pair = temp_path("tamper.pair");
  REQUIRE(cmd_build(cfg).passed());
  PairArtifact a = load_pair(cfg.pair);
  auto o = StructureOracle::replay(a.oracle, a.journal);
  // Remap the last phi point to an unused element that breaks some pair code.
  const std::vector<Element> used = covered_points(a.pair);
  std::vector<Element> d = a.pair.phi.domain(), i = a.pair.phi.image();
  bool changed = false;
  for (Element y = 0; y < o->size() && !changed; ++y) {
    if (std::binary_search(used.begin(), used.end(), y)) continue;
    i.back() = y;
    changed = !PartialAutomorphism(d, i).preserves_types(*o);
  }
  REQUIRE(changed);
  a.pair.phi = PartialAutomorphism(d, i);
  save_pair(cfg.pair, a);
  const Report v = cmd_verify(cfg);
  CHECK_FALSE(v.passed());
  REQUIRE(v.find("types") != nullptr);
  CHECK_FALSE(v.find("types")->pass);
  CHECK_FALSE(v.find("roundtrip")->pass);
  std::remove(cfg.pair.c_str());
}

TEST_CASE("truncated or missing pair files are parse errors") {
  RunConfig cfg = small_config();
  cfg.pair = temp_path("trunc.pair");
  REQUIRE(cmd_build(cfg).passed());
  const std::string text = write_pair(load_pair(cfg.pair));
  {
    std::FILE* f = std::fopen(cfg.pair.c_str(), "wb");
    std::fwrite(text.data(), 1, text.size() / 2, f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(cmd_verify(cfg), ParseError);
  std::remove(cfg.pair.c_str());
  CHECK_THROWS_AS(cmd_verify(cfg), ParseError);
  cfg.pair.clear();
  CHECK_THROWS_AS(cmd_verify(cfg), ParseError);
}

TEST_CASE("rounds = 0 persists the initial pair") {
  RunConfig cfg = small_config();
  cfg.rounds = 0;
  cfg.pair = temp_path("init.pair");
  CHECK(cmd_build(cfg).passed());
  const PairArtifact a = load_pair(cfg.pair);
  CHECK(a.pair.phi.size() == 1);
  CHECK(a.pair.gamma.size() == 1);
  CHECK(a.steps.empty());
  CHECK(cmd_verify(cfg).passed());
  std::remove(cfg.pair.c_str());
}

TEST_CASE("orbits, spectra and counterexample reports pass") {
  RunConfig cfg = small_config();
  for (OracleKind kind : kAllKinds) {
    cfg.oracle.kind = kind;
    cfg.oracle.level = default_level(kind);
    CHECK(cmd_orbits(cfg).passed());
  }
  cfg = small_config();
  CHECK(cmd_spectra(cfg).passed());
  cfg.demo_depth = 1;
  CHECK(cmd_counterexample(cfg).passed());
  const std::string w = cmd_window(cfg);
  CHECK(w.rfind("WINDOW/1", 0) == 0);
}

TEST_CASE("spectra with a pair compares orbit and cayley balls") {
  RunConfig cfg = small_config();
  cfg.pair = temp_path("spectra.pair");
  REQUIRE(cmd_build(cfg).passed());
  const Report r = cmd_spectra(cfg);
  CHECK(r.passed());
  for (std::size_t k = 1; k <= 3; ++k) CHECK(r.find("orbit_r" + std::to_string(k)) != nullptr);
  std::remove(cfg.pair.c_str());
}
