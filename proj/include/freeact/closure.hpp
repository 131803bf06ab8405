#pragma once

// Orbit partitions under pointwise stabilizers and algebraic closure.
//
// Orbits of the pointwise stabilizer of a finite base E are read off as
// quantifier-free types over E (the built-in oracles are homogeneous).
// A class is finite when its size stops growing as the window grows; this is
// a semi-decision, so every answer carries the probe sizes it was based on.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "freeact/structures.hpp"

namespace freeact {

enum class TupleView { All, Injective };

struct OrbitClass {
  QfType type;          // type of base ++ tuple
  std::size_t count = 0;
  Tuple representative;  // least tuple in enumeration order
};

struct OrbitPartition {
  std::vector<Element> base;
  std::size_t arity = 0;
  TupleView view = TupleView::All;
  std::size_t level = 0;
  std::size_t window_size = 0;
  std::size_t tuple_count = 0;
  std::vector<OrbitClass> classes;  // sorted by type

  std::size_t class_count() const { return classes.size(); }
  // Index into classes of the class holding t, or npos.
  std::size_t class_of(const StructureOracle& oracle, std::span<const Element> t) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Partition of window(level)^n by type over `base`.
OrbitPartition orbit_partition(StructureOracle& oracle, std::span<const Element> base,
                               std::size_t arity, std::size_t level,
                               TupleView view = TupleView::All);

// Size history of one class of single elements over the base.
struct ClassCertificate {
  std::vector<PairCode> profile;     // code(base[j], x)
  Element representative = 0;
  std::vector<std::size_t> levels;   // probe levels
  std::vector<std::size_t> sizes;    // class size at each probe level
  enum class Verdict { Finite, Infinite, Undecided } verdict = Verdict::Undecided;
  std::size_t decided_at = 0;        // probe level of the decision
  std::size_t growth_steps() const;
};

enum class AclStatus { Certified, Indeterminate };

struct AclResult {
  std::vector<Element> base;        // sorted
  std::vector<Element> probe_base;  // least tuple of the same type as base, probed instead
  std::vector<Element> members;  // sorted; always contains base
  std::vector<ClassCertificate> classes;
  AclStatus status = AclStatus::Indeterminate;
  std::size_t start_level = 0;
  std::size_t final_level = 0;
  std::string note;

  bool certified() const { return status == AclStatus::Certified; }
};

// acl(E): E together with the members of every finite class over E. Since
// acl commutes with automorphisms, the probes run over the id-least tuple E'
// with the type of E, which lives in the earliest possible window. Classes
// over E' are read among the elements present at the start level; a class is
// Infinite once its size grew at two probe transitions and Finite once it held
// still across the last two. Probes walk oracle.next_probe_level from
// max(level containing E', configured level) up to level_max.
AclResult acl(StructureOracle& oracle, std::span<const Element> base, std::size_t level_max);

// Convenience: acl with the default budget of four probe steps past the start.
AclResult acl(StructureOracle& oracle, std::span<const Element> base);

struct AlgebraicitySample {
  std::vector<Element> base;
  AclResult result;
  bool passed = false;
  std::string detail;  // offending class on failure
};

struct NoAlgebraicityReport {
  OracleKind kind{};
  std::size_t level = 0;
  std::vector<AlgebraicitySample> samples;
  bool passed = false;
  std::size_t min_growth_steps = 0;  // over all Infinite classes seen
};

// Samples `sample_size` finite sets E (|E| <= max_base, E[0] is always the
// empty set) from window(level) and checks acl(E) == E for each.
NoAlgebraicityReport assert_no_algebraicity(StructureOracle& oracle, std::size_t sample_size,
                                            std::size_t level, std::uint64_t seed = 1,
                                            std::size_t max_base = 3);

// Closure certificate used by the separation and free-pair code.
struct ClosureCertificate {
  enum class Basis { Probed, Structural } basis = Basis::Probed;
  bool closed = false;
  std::string note;
};

// Certifies that `set` is algebraically closed. Small sets are probed
// directly; larger ones rely on the oracle-wide
// no-algebraicity certificate (`oracle_certified`), since their classes are
// too thin to observe growing in a finite window.
ClosureCertificate certify_closed(StructureOracle& oracle, std::span<const Element> set,
                                  bool oracle_certified, std::size_t probe_max_size = 3);

}  // namespace freeact
