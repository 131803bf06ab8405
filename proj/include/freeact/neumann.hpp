#pragma once

// Effective separation of finite sets by partial automorphisms.
//
// Witnesses are found by exhaustive search over the current window in
// id-lexicographic order. When the window (after a bounded amount of growth)
// holds no witness, the oracle constructs fresh elements one at a time, which
// always succeeds when the structure has no algebraicity.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "freeact/closure.hpp"
#include "freeact/partial_automorphism.hpp"
#include "freeact/structures.hpp"

namespace freeact {

struct SearchPolicy {
  // Window searches may grow the oracle up to this many probe steps past its
  // configured start level before falling back to construction.
  std::size_t grow_steps = 1;
  std::size_t node_budget = 1'000'000;   // candidate checks per window search
  bool allow_construct = true;
};

struct SeparationWitness {
  PartialAutomorphism mover;         // domain = fixed_base ++ (moved_set minus fixed_base)
  std::vector<Element> fixed_base;   // sorted
  std::vector<Element> moved_set;    // sorted
  std::vector<Element> avoided_set;  // sorted
  std::size_t level = 0;             // oracle level when the witness was found
  bool constructed = false;          // some image point was constructed
};

// Tuple realizing the type of points over src_base, relocated over dst_base.
struct FreshImage {
  std::vector<Element> points;
  std::size_t level = 0;
  bool constructed = false;
  std::size_t nodes = 0;  // candidate checks spent in window searches
};

// Finds d with qf_type(dst_base ++ d) == qf_type(src_base ++ points) and no
// entry of d in `avoid`. Throws InvalidInput when the two bases have different
// types or points meet src_base, ResourceLimit when the policy forbids
// construction and the window search fails. Callers that already maintain
// type equality of the bases may skip its quadratic check.
FreshImage find_fresh_image(StructureOracle& oracle, std::span<const Element> src_base,
                            std::span<const Element> dst_base, std::span<const Element> points,
                            std::span<const Element> avoid, const SearchPolicy& policy = {},
                            bool check_bases = true);

// Holds the oracle-wide certificate (acl of every small sample, including the
// empty set, is trivial) and checks closedness of inputs against it.
class Separator {
 public:
  explicit Separator(StructureOracle& oracle, SearchPolicy policy = {});

  StructureOracle& oracle() { return oracle_; }
  const SearchPolicy& policy() const { return policy_; }

  bool oracle_certified();
  // Throws CertificationFailure unless `set` is certified acl-closed.
  void require_closed(std::span<const Element> set, const std::string& what);

  // g with g(A) disjoint from B.
  SeparationWitness separate(std::span<const Element> A, std::span<const Element> B);
  // g fixing B pointwise with g(C) meeting A exactly in B n A. Requires B within C.
  SeparationWitness separate_over(std::span<const Element> A, std::span<const Element> B,
                                  std::span<const Element> C);

 private:
  StructureOracle& oracle_;
  SearchPolicy policy_;
  std::optional<bool> certified_;
};

SeparationWitness separate(StructureOracle& oracle, std::span<const Element> A,
                           std::span<const Element> B, const SearchPolicy& policy = {});
SeparationWitness separate_over(StructureOracle& oracle, std::span<const Element> A,
                                std::span<const Element> B, std::span<const Element> C,
                                const SearchPolicy& policy = {});

struct WitnessCheck {
  bool ok = false;
  std::string reason;
};

// Re-evaluates a witness from scratch: the mover fixes the base, is defined
// exactly on the moved set, preserves pair codes, and its image of the moved
// set meets the avoided set exactly in base n avoided.
WitnessCheck recheck_witness(const StructureOracle& oracle, const SeparationWitness& w);

}  // namespace freeact
