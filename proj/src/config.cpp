#include "freeact/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace freeact {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(std::string_view section, std::string_view key) {
  return std::string(section) + "." + std::string(key);
}

std::size_t parse_size(std::string_view section, std::string_view key, std::string_view v) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ParseError(where(section, key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

double parse_real(std::string_view section, std::string_view key, std::string_view v) {
  const std::string s(v);
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw ParseError(where(section, key) + ": expected a number, got '" + s + "'");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  return {
      {"oracle.kind", std::string(to_string(oracle.kind))},
      {"oracle.seed", std::to_string(oracle.seed)},
      {"oracle.level", std::to_string(oracle.level)},
      {"oracle.max_elements", std::to_string(oracle.max_elements)},
      {"oracle.ext_cap", std::to_string(oracle.extension_cap)},
      {"build.rounds", std::to_string(rounds)},
      {"build.cert_depth", std::to_string(cert_depth)},
      {"build.ball_radius", std::to_string(ball_radius)},
      {"spectra.rmax", std::to_string(rmax)},
      {"spectra.tol", format_double(tol)},
      {"spectra.samples", std::to_string(samples)},
      {"spectra.max_dim", std::to_string(max_dim)},
      {"counterexample.depth", std::to_string(demo_depth)},
      {"counterexample.budget", std::to_string(demo_budget)},
  };
}

void apply_setting(RunConfig& cfg, std::string_view section, std::string_view key,
                   std::string_view value) {
  if (section == "oracle") {
    if (key == "kind") {
      auto k = parse_oracle_kind(value);
      if (!k) throw ParseError("oracle.kind: unknown oracle '" + std::string(value) + "'");
      cfg.oracle.kind = *k;
      if (!cfg.level_explicit) cfg.oracle.level = default_level(*k);
      return;
    }
    if (key == "seed") return void(cfg.oracle.seed = parse_size(section, key, value));
    if (key == "level") {
      cfg.oracle.level = parse_size(section, key, value);
      cfg.level_explicit = true;
      return;
    }
    if (key == "max_elements") return void(cfg.oracle.max_elements = parse_size(section, key, value));
    if (key == "ext_cap") return void(cfg.oracle.extension_cap = parse_size(section, key, value));
  } else if (section == "build") {
    if (key == "rounds") return void(cfg.rounds = parse_size(section, key, value));
    if (key == "cert_depth") return void(cfg.cert_depth = parse_size(section, key, value));
    if (key == "ball_radius") return void(cfg.ball_radius = parse_size(section, key, value));
  } else if (section == "spectra") {
    if (key == "rmax") return void(cfg.rmax = parse_size(section, key, value));
    if (key == "tol") return void(cfg.tol = parse_real(section, key, value));
    if (key == "samples") return void(cfg.samples = parse_size(section, key, value));
    if (key == "max_dim") return void(cfg.max_dim = parse_size(section, key, value));
  } else if (section == "counterexample") {
    if (key == "depth") return void(cfg.demo_depth = parse_size(section, key, value));
    if (key == "budget") return void(cfg.demo_budget = parse_size(section, key, value));
  } else if (section == "output") {
    if (key == "out") return void(cfg.out = std::string(value));
    if (key == "pair") return void(cfg.pair = std::string(value));
  } else {
    throw ParseError("unknown section [" + std::string(section) + "]");
  }
  throw ParseError("unknown key " + where(section, key));
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  RunConfig cfg = std::move(base);
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    try {
      if (line.front() == '[') {
        if (line.back() != ']') throw ParseError("unterminated section header");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        if (section != "oracle" && section != "build" && section != "spectra" &&
            section != "counterexample" && section != "output")
          throw ParseError("unknown section [" + section + "]");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected key=value");
      if (section.empty()) throw ParseError("setting outside any section");
      const std::string_view key = trim(line.substr(0, eq));
      const std::string_view value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty()) throw ParseError("empty key or value");
      apply_setting(cfg, section, key, value);
    } catch (const ParseError& e) {
      throw ParseError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void validate(const RunConfig& cfg) {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ParseError(std::string(name) + " must be positive");
  };
  positive(cfg.oracle.seed, "oracle.seed");
  positive(cfg.oracle.level, "oracle.level");
  positive(cfg.oracle.max_elements, "oracle.max_elements");
  positive(cfg.oracle.extension_cap, "oracle.ext_cap");
  positive(cfg.cert_depth, "build.cert_depth");
  positive(cfg.ball_radius, "build.ball_radius");
  positive(cfg.rmax, "spectra.rmax");
  positive(cfg.max_dim, "spectra.max_dim");
  positive(cfg.demo_depth, "counterexample.depth");
  positive(cfg.demo_budget, "counterexample.budget");
  if (!(cfg.tol > 0)) throw ParseError("spectra.tol must be positive");
  if (cfg.cert_depth > 16) throw ParseError("build.cert_depth must be at most 16");
  if (cfg.ball_radius > 12) throw ParseError("build.ball_radius must be at most 12");
  if (cfg.rmax > 19) throw ParseError("spectra.rmax must be at most 19");
}

}  // namespace freeact
