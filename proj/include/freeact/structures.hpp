#pragma once

// Finite windows onto countable homogeneous structures.
//
// Every oracle presents its structure as a growing window whose element ids
// are assigned in creation order, so the window at any level is a prefix of
// every later window. All built-in signatures are binary, which means the
// quantifier-free type of a tuple is determined by the "pair codes" of its
// entries taken two at a time.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freeact/errors.hpp"

namespace freeact {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

// Encodes every atomic fact relating an ordered pair (x, y), including
// whether x = y. Code 0 always means equality. The meaning of the other
// values depends on the oracle kind:
//   PureSet           1: x != y
//   DenseLinearOrder  1: x < y, 2: x > y
//   RandomGraph       1: E(x,y), 2: not E(x,y)
//   EquivTower        (mask << 1) | 1, bit i of mask set iff not E_{i+1}(x,y)
using PairCode = std::uint64_t;

enum class OracleKind { RandomGraph, DenseLinearOrder, EquivTower, PureSet };

std::string_view to_string(OracleKind kind);
std::optional<OracleKind> parse_oracle_kind(std::string_view name);

// Code describing (y, x) given the code for (x, y).
PairCode swap_pair_code(OracleKind kind, PairCode code);

// Canonical quantifier-free type of an ordered tuple.
class QfType {
 public:
  QfType() = default;
  QfType(OracleKind kind, std::size_t arity, std::vector<PairCode> codes);

  OracleKind kind() const { return kind_; }
  std::size_t arity() const { return arity_; }
  const std::vector<PairCode>& codes() const { return codes_; }

  // Code for positions (i, j); i == j yields 0.
  PairCode at(std::size_t i, std::size_t j) const;

  // Type of the tuple (t[perm[0]], ..., t[perm[k-1]]) where t has this type.
  // perm may select a sub-tuple.
  QfType select(std::span<const std::size_t> positions) const;

  // Human-readable atom list, e.g. "{x0<x1, x0!=x1}".
  std::string to_string() const;

  friend bool operator==(const QfType&, const QfType&) = default;
  friend auto operator<=>(const QfType& a, const QfType& b) {
    if (auto c = a.arity_ <=> b.arity_; c != 0) return c;
    return a.codes_ <=> b.codes_;
  }

 private:
  static std::size_t index(std::size_t i, std::size_t j, std::size_t n);

  OracleKind kind_ = OracleKind::PureSet;
  std::size_t arity_ = 0;
  // Row-major upper triangle: (0,1), (0,2), ..., (1,2), ...
  std::vector<PairCode> codes_;
};

struct QfTypeHash {
  std::size_t operator()(const QfType& t) const;
};

struct RelationSymbol {
  std::string name;
  std::size_t arity = 2;
};

// Plain snapshot of a window, used for export and for brute-force checks.
struct FiniteStructure {
  OracleKind kind = OracleKind::PureSet;
  std::vector<Element> elements;
  std::vector<std::string> descriptors;  // parallel to elements
  std::vector<RelationSymbol> signature;
  std::map<std::string, std::vector<Tuple>> relations;

  std::size_t size() const { return elements.size(); }
};

// Line-oriented text: header, one "element" line per element, one "tuple"
// line per relation tuple.
std::string export_window(const FiniteStructure& s);

struct OracleParams {
  OracleKind kind = OracleKind::RandomGraph;
  std::uint64_t seed = 1;
  std::size_t level = 0;              // window level reached at creation
  std::size_t max_elements = 20000;
  std::size_t extension_cap = 3;      // RandomGraph: k-extension closed up to min(level, cap)
};

// Default starting level: the smallest level with a window of >= 30 elements.
std::size_t default_level(OracleKind kind);

// One event that changed the window. Replaying the same journal on a fresh
// oracle with the same kind and seed reproduces the window exactly.
struct JournalEntry {
  enum class Kind { Grow, Construct } kind = Kind::Grow;
  std::size_t level = 0;               // Grow: level reached
  std::vector<Element> base;           // Construct: base tuple
  std::vector<PairCode> profile;       // Construct: code(base[j], new)
  friend bool operator==(const JournalEntry&, const JournalEntry&) = default;
};

class StructureOracle {
 public:
  static std::unique_ptr<StructureOracle> create(const OracleParams& params);
  // Rebuilds an oracle from a journal. Growth comes from the journal alone;
  // params.level is kept as the configured start level.
  static std::unique_ptr<StructureOracle> replay(const OracleParams& params,
                                                 std::span<const JournalEntry> journal);

  virtual ~StructureOracle() = default;
  StructureOracle(const StructureOracle&) = delete;
  StructureOracle& operator=(const StructureOracle&) = delete;

  OracleKind kind() const { return params_.kind; }
  const OracleParams& params() const { return params_; }

  std::size_t level() const { return checkpoints_.size() - 1; }
  std::size_t size() const { return element_count(); }
  bool contains(Element x) const { return x < size(); }
  // Number of elements present once `lvl` was reached; requires lvl <= level().
  std::size_t size_at_level(std::size_t lvl) const;
  // Smallest level whose window contains x. Elements constructed after the
  // last level was reached report level() + 1.
  std::size_t level_containing(Element x) const;
  // Next level at which every infinite class of a fixed type is expected to
  // gain members. Used by the algebraic-closure probes.
  virtual std::size_t next_probe_level(std::size_t lvl) const { return lvl + 1; }

  // Grows the window until level() >= lvl. Throws ResourceLimit.
  void grow_to(std::size_t lvl);

  PairCode pair_code(Element x, Element y) const;
  QfType qf_type(std::span<const Element> t) const;
  QfType qf_type(std::initializer_list<Element> t) const {
    return qf_type(std::span<const Element>(t.begin(), t.size()));
  }
  bool same_orbit(std::span<const Element> t1, std::span<const Element> t2) const;

  // Element x with qf_type(base ++ x) == demand. Searches the window first
  // (least id), otherwise appends a new element by amalgamation. Throws
  // InvalidInput for inconsistent demands, ResourceLimit at the size cap.
  Element realize_extension(std::span<const Element> base, const QfType& demand);

  // Least y in the window, y not in `avoid`, with code(base[j], y) == profile[j].
  std::optional<Element> find_realization(std::span<const Element> base,
                                          std::span<const PairCode> profile,
                                          std::span<const Element> avoid) const;
  // As find_realization, but constructs a fresh element when the window has
  // none. The profile must be consistent with the type of base.
  Element realize_profile(std::span<const Element> base, std::span<const PairCode> profile,
                          std::span<const Element> avoid);

  // Snapshot of the window prefix at `lvl` (or the whole window).
  FiniteStructure snapshot() const { return snapshot_prefix(size()); }
  FiniteStructure snapshot_prefix(std::size_t count) const;

  virtual std::string describe(Element x) const = 0;

  const std::vector<JournalEntry>& journal() const { return journal_; }

 protected:
  explicit StructureOracle(const OracleParams& params);

  virtual std::size_t element_count() const = 0;
  virtual PairCode raw_pair_code(Element x, Element y) const = 0;
  // Appends the canonical elements that level `lvl` adds (lvl == 0 seeds
  // the initial window).
  virtual void grow_one_level(std::size_t lvl) = 0;
  // Appends a fresh element realizing the profile over base, or returns
  // nullopt when the profile is not realizable in the limit. The profile
  // contains no equality codes and is consistent with the type of base.
  virtual std::optional<Element> construct(std::span<const Element> base,
                                           std::span<const PairCode> profile) = 0;
  virtual std::vector<RelationSymbol> signature() const = 0;
  virtual void add_relation_tuples(std::size_t count, FiniteStructure& out) const = 0;

  void check_capacity(std::size_t additional) const;

  OracleParams params_;

 private:
  void grow_level_checked(std::size_t next);
  void validate_profile(std::span<const Element> base, std::span<const PairCode> profile) const;
  Element construct_checked(std::span<const Element> base, std::span<const PairCode> profile);

  std::vector<std::size_t> checkpoints_;  // checkpoints_[l] = size at level l
  std::vector<JournalEntry> journal_;
};

// window(oracle, level): grows the oracle and returns the level-th window.
FiniteStructure window(StructureOracle& oracle, std::size_t level);

// RandomGraph only: list of (U, V) demands with |U u V| <= k that have no
// witness among the first `count` elements. Empty means k-extension holds.
struct ExtensionDefect {
  std::vector<Element> adjacent;
  std::vector<Element> non_adjacent;
};
std::vector<ExtensionDefect> extension_defects(const StructureOracle& oracle, std::size_t k,
                                               std::size_t count, std::size_t max_report = 8);

}  // namespace freeact
