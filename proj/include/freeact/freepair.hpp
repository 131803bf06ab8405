#pragma once

// Free pairs of partial automorphisms built by back-and-forth.
//
// A pair (phi, gamma) approximates two automorphisms f, g. Every extension
// keeps the new image fresh against all sets already in play, which keeps
// every reduced word in the pair fixed-point free.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freeact/neumann.hpp"
#include "freeact/partial_automorphism.hpp"
#include "freeact/structures.hpp"

namespace freeact {

// a, a^-1, b, b^-1. Text form: a, A, b, B.
enum class Letter : std::uint8_t { A = 0, AInv = 1, B = 2, BInv = 3 };

Letter inverse(Letter l);
char letter_char(Letter l);

class ReducedWord {
 public:
  // Throws InvalidInput for the empty word or an adjacent inverse pair.
  static ReducedWord make(std::vector<Letter> letters);
  static ReducedWord parse(std::string_view text);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  std::string to_string() const;

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;

 private:
  std::vector<Letter> letters_;
};

// Number of reduced words of length 1..L.
std::size_t reduced_word_count(std::size_t L);
// All reduced words of length 1..L, by length and then lexicographically
// in the letter order a < a^-1 < b < b^-1.
std::vector<ReducedWord> reduced_words(std::size_t L);

struct FreePair {
  PartialAutomorphism phi;
  PartialAutomorphism gamma;
};

std::optional<Element> apply_letter(Letter l, const FreePair& pair, Element x);
// Right-to-left composition; nullopt as soon as a factor is undefined.
std::optional<Element> apply_word(const ReducedWord& w, const FreePair& pair, Element x);
std::optional<Element> apply_word(const ReducedWord& w, const PartialAutomorphism& phi,
                                  const PartialAutomorphism& gamma, Element x);

struct FixedPointViolation {
  ReducedWord word;
  Element x = 0;
};

struct FixedPointReport {
  std::size_t max_length = 0;
  std::size_t words = 0;        // reduced words of length 1..max_length
  std::size_t points = 0;       // start points examined
  std::size_t evaluations = 0;  // words * points
  std::size_t defined = 0;      // evaluations where the word was defined
  std::size_t violation_count = 0;
  std::vector<FixedPointViolation> violations;  // the first max_report found
  bool clean() const { return violation_count == 0; }
};

// Evaluates every reduced word of length <= L at every point of `window`.
FixedPointReport check_fixed_points(const FreePair& pair, std::size_t L,
                                    std::span<const Element> window,
                                    std::size_t max_report = 16);

enum class Side { Phi, Gamma };
enum class Direction { Domain, Image };
std::string_view to_string(Side s);
std::string_view to_string(Direction d);

// One extension: the chosen side grew from its size at phi_before /
// gamma_before to `after` insertions. All sets involved are prefixes of the
// final maps, so the record is enough to rebuild them.
struct ExtensionRecord {
  Side side = Side::Phi;
  Direction direction = Direction::Domain;
  std::size_t phi_before = 0;
  std::size_t gamma_before = 0;
  std::size_t after = 0;
  std::size_t level = 0;
  bool constructed = false;
  friend bool operator==(const ExtensionRecord&, const ExtensionRecord&) = default;
};

// The sets of one extension, oriented so the extended map is psi: A -> B
// grown to C -> D, with A', B' the other map's domain and image.
struct FreshnessLedger {
  std::vector<Element> A, B, C, D, A_other, B_other;  // all sorted
  bool holds = false;  // D n (C u B u A' u B') == B
};

FreshnessLedger freshness_ledger(const FreePair& final_pair, const ExtensionRecord& rec);

struct BuilderConfig {
  std::size_t cert_depth = 8;  // word length checked after every step
  SearchPolicy policy{};
};

class FreePairBuilder {
 public:
  // Certifies the oracle and creates single-point phi, gamma whose two
  // domains and two images are pairwise disjoint.
  FreePairBuilder(StructureOracle& oracle, BuilderConfig config = {});
  // Continues from a persisted pair. Nothing is re-checked here.
  FreePairBuilder(StructureOracle& oracle, BuilderConfig config, FreePair pair,
                  std::vector<ExtensionRecord> steps);

  const FreePair& pair() const { return pair_; }
  const std::vector<ExtensionRecord>& steps() const { return steps_; }
  std::size_t certified_length() const { return certified_length_; }
  StructureOracle& oracle() { return oracle_; }
  Separator& separator() { return separator_; }

  // Extends the chosen side so its domain (or image) becomes `target`, which
  // must contain the current one and be certified acl-closed. A target equal
  // to the current set changes nothing.
  void extend_step(Side side, Direction dir, std::span<const Element> target);

  // Back-and-forth: each round runs the four phases (phi domain, phi image,
  // gamma domain, gamma image), adding the least uncovered element.
  void run_rounds(std::size_t rounds);

  // Extends the pair until every reduced word of length <= r is defined at base.
  void extend_for_ball(Element base, std::size_t r);

 private:
  void verify_step(Side side, std::size_t before);
  const PartialAutomorphism& map_of(Side s) const { return s == Side::Phi ? pair_.phi : pair_.gamma; }
  PartialAutomorphism& map_of(Side s) { return s == Side::Phi ? pair_.phi : pair_.gamma; }

  StructureOracle& oracle_;
  BuilderConfig config_;
  Separator separator_;
  FreePair pair_;
  std::vector<ExtensionRecord> steps_;
  std::size_t certified_length_ = 0;
};

// Init plus `rounds` back-and-forth rounds, then a full fixed-point check of
// words up to cert_depth over the covered points.
struct BuildResult {
  FreePair pair;
  std::vector<ExtensionRecord> steps;
  FixedPointReport fixed_points;
};
BuildResult build(StructureOracle& oracle, std::size_t rounds, std::size_t cert_depth,
                  const SearchPolicy& policy = {});

// Points touched by the pair, sorted.
std::vector<Element> covered_points(const FreePair& pair);

struct SchreierEdge {
  Element from = 0;
  Element to = 0;
  Letter letter = Letter::A;  // to = letter(from)
};

struct SchreierBall {
  Element base = 0;
  std::size_t radius = 0;
  std::vector<Element> vertices;  // BFS order, distinct
  std::vector<SchreierEdge> edges;
  std::size_t walk_nodes = 0;     // reduced words of length <= radius, with the empty word
  bool complete = false;          // every word of length <= radius defined at base
  bool acyclic = false;
  bool is_tree_ball() const { return complete && acyclic && vertices.size() == walk_nodes; }
};

SchreierBall schreier_ball(const FreePair& pair, Element base, std::size_t r);
// Extends the builder first so the ball is complete.
SchreierBall schreier_ball(FreePairBuilder& builder, Element base, std::size_t r);

// Tower counterexample

struct ImaginaryClass {
  std::size_t n = 0;         // relation index, from 1
  Element representative = 0;
};

bool same_class(const StructureOracle& oracle, const ImaginaryClass& a, const ImaginaryClass& b);

// Least n with E_n(x, f(x)): f fixes the E_n-class of x.
ImaginaryClass tower_fixed_class(const StructureOracle& oracle, const PartialAutomorphism& f,
                                 Element x);

struct TowerDemoReport {
  Element x = 0;
  std::size_t depth = 0;
  std::size_t candidates = 0;           // images y examined
  std::size_t separated = 0;            // candidates fixing no class of x
  std::vector<std::size_t> histogram;   // histogram[n]: candidates whose fixed class is E_n
  std::size_t max_fixed_index = 0;
  bool exhaustive = false;              // every candidate in window(depth) examined
  bool home_sort_separated = false;     // separate({x}, {x}) succeeded in the home sort
  bool failure_confirmed() const { return exhaustive && candidates > 0 && separated == 0; }
};

// Every map x -> y with y in window(depth) is a partial automorphism. For each
// one the report records which E_n-class of x it fixes, showing that no
// candidate moves the imaginary classes of x off themselves.
TowerDemoReport tower_neumann_failure_demo(StructureOracle& oracle, Element x, std::size_t depth,
                                           std::size_t budget = 100000);

}  // namespace freeact
