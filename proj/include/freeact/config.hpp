#pragma once

// Run configuration: a flat key=value file with [sections], parsed strictly.
//
//   [oracle]          kind, seed, level, max_elements, ext_cap
//   [build]           rounds, cert_depth, ball_radius
//   [spectra]         rmax, tol, samples, max_dim
//   [counterexample]  depth, budget
//   [output]          out, pair

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "freeact/structures.hpp"

namespace freeact {

struct RunConfig {
  OracleParams oracle{OracleKind::RandomGraph, 1, default_level(OracleKind::RandomGraph), 20000, 3};
  bool level_explicit = false;  // otherwise follows default_level(kind)

  std::size_t rounds = 25;
  std::size_t cert_depth = 8;
  std::size_t ball_radius = 6;

  std::size_t rmax = 6;
  double tol = 1e-10;
  std::size_t samples = 10000;
  std::size_t max_dim = 2'000'000;

  std::size_t demo_depth = 2;
  std::size_t demo_budget = 100000;

  std::string out;
  std::string pair;

  // Ordered "section.key=value" pairs for report echoes.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

// Applies one setting; throws ParseError on unknown keys or bad values.
void apply_setting(RunConfig& cfg, std::string_view section, std::string_view key,
                   std::string_view value);

// Parses config text on top of `base`. Throws ParseError with a line number.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// Throws ParseError unless every numeric field is in range.
void validate(const RunConfig& cfg);

std::string format_double(double v);

}  // namespace freeact
