// freeact: command-line driver.
//
//   freeact <orbits|build|verify|spectra|counterexample|window> [options]
//
// Options override the config file given by --config. Reports go to stdout
// and, with --out, to a file as well.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "freeact/commands.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> oracle;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> level;
  std::optional<std::size_t> rounds;
  std::optional<std::size_t> cert_depth;
  std::optional<std::size_t> rmax;
  std::optional<double> tol;
  std::optional<std::size_t> samples;
  std::optional<std::string> out;
  std::optional<std::string> pair;
};

freeact::RunConfig resolve(const Overrides& o) {
  using freeact::apply_setting;
  freeact::RunConfig cfg;
  if (!o.config.empty()) cfg = freeact::load_config(o.config);
  if (o.oracle) apply_setting(cfg, "oracle", "kind", *o.oracle);
  if (o.seed) apply_setting(cfg, "oracle", "seed", std::to_string(*o.seed));
  if (o.level) apply_setting(cfg, "oracle", "level", std::to_string(*o.level));
  if (o.rounds) cfg.rounds = *o.rounds;
  if (o.cert_depth) cfg.cert_depth = *o.cert_depth;
  if (o.rmax) cfg.rmax = *o.rmax;
  if (o.tol) cfg.tol = *o.tol;
  if (o.samples) cfg.samples = *o.samples;
  if (o.out) cfg.out = *o.out;
  if (o.pair) cfg.pair = *o.pair;
  freeact::validate(cfg);
  return cfg;
}

void emit(const std::string& text, const std::string& out_path) {
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw freeact::ParseError("cannot write output file " + out_path);
    f << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free group actions on homogeneous structures: construction and certification"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config, "Config file ([oracle], [build], [spectra], ...)");
  app.add_option("--oracle", o.oracle, "random-graph | dlo | equiv-tower | pure-set");
  app.add_option("--seed", o.seed, "Oracle seed");
  app.add_option("--level", o.level, "Window level");
  app.add_option("--rounds", o.rounds, "Back-and-forth rounds");
  app.add_option("--cert-depth", o.cert_depth, "Word length L for fixed-point checks");
  app.add_option("--rmax", o.rmax, "Largest ball radius for spectra");
  app.add_option("--tol", o.tol, "Eigenvalue residual tolerance");
  app.add_option("--samples", o.samples, "Random unit vectors per radius");
  app.add_option("--out", o.out, "Also write the report (or window) to this file");
  app.add_option("--pair", o.pair, "Pair file written by build, read by verify and spectra");

  const char* names[] = {"orbits", "build", "verify", "spectra", "counterexample", "window"};
  const char* help[] = {"Orbit counts on n-tuples, n = 1..4",
                        "Build and certify a free pair; persist it with --pair",
                        "Reload a pair file and re-certify it",
                        "Kesten norm, displacement bound, orbit spectra with --pair",
                        "Tower structure: failure of separation for imaginaries",
                        "Export the window at the configured level"};
  for (std::size_t i = 0; i < 6; ++i) app.add_subcommand(names[i], help[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : freeact::kExitUsage;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    const freeact::RunConfig cfg = resolve(o);
    if (cmd == "window") {
      emit(freeact::cmd_window(cfg), cfg.out);
      return freeact::kExitPass;
    }
    const auto t0 = std::chrono::steady_clock::now();
    freeact::Report rep = cmd == "orbits"         ? freeact::cmd_orbits(cfg)
                          : cmd == "build"        ? freeact::cmd_build(cfg)
                          : cmd == "verify"       ? freeact::cmd_verify(cfg)
                          : cmd == "spectra"      ? freeact::cmd_spectra(cfg)
                                                  : freeact::cmd_counterexample(cfg);
    rep.set_seconds(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    emit(rep.render(), cfg.out);
    return freeact::exit_code_for(rep);
  } catch (const freeact::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return freeact::kExitResource;
  } catch (const freeact::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return freeact::kExitUsage;
  } catch (const freeact::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return freeact::kExitUsage;
  } catch (const freeact::CertificationFailure& e) {
    std::cerr << "certification failed: " << e.what() << '\n';
    return freeact::kExitCheckFailed;
  }
}
