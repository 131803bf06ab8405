#pragma once

// FREEPAIR/1: persisted free pair with everything needed to rebuild the
// oracle window it lives in.
//
//   FREEPAIR/1
//   oracle <kind> seed=<s> level=<l> max_elements=<m> ext_cap=<c>
//   grow <level>
//   construct base=<e,e,...> profile=<c,c,...>
//   phi <x> <y>
//   gamma <x> <y>
//   step <phi|gamma> <domain|image> <phi_before> <gamma_before> <after> <level> <0|1>
//   cert_depth <L>
//   ball_radius <r>
//   cert <check line>
//   end
//
// Lines appear in this order; "end" is mandatory so truncation is detected.

#include <string>
#include <string_view>
#include <vector>

#include "freeact/freepair.hpp"
#include "freeact/structures.hpp"

namespace freeact {

inline constexpr const char* kPairFormat = "FREEPAIR/1";

struct PairArtifact {
  OracleParams oracle;
  std::vector<JournalEntry> journal;
  FreePair pair;
  std::vector<ExtensionRecord> steps;
  std::size_t cert_depth = 8;
  std::size_t ball_radius = 6;
  std::vector<std::string> certification;  // rendered check lines
};

std::string write_pair(const PairArtifact& a);
// Throws ParseError on any malformed or missing line.
PairArtifact read_pair(std::string_view text);

void save_pair(const std::string& path, const PairArtifact& a);
PairArtifact load_pair(const std::string& path);

}  // namespace freeact
