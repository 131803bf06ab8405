#pragma once

// Shared generators and brute-force references for the test suite.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "freeact/structures.hpp"

namespace freeact::testing {

inline constexpr OracleKind kAllKinds[] = {OracleKind::RandomGraph, OracleKind::DenseLinearOrder,
                                           OracleKind::EquivTower, OracleKind::PureSet};

inline std::unique_ptr<StructureOracle> make_oracle(OracleKind kind, std::uint64_t seed = 1,
                                                    std::size_t level = 0) {
  OracleParams p;
  p.kind = kind;
  p.seed = seed;
  p.level = level ? level : default_level(kind);
  return StructureOracle::create(p);
}

// Small deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return below(2) == 1; }

  // Distinct ids in [0, n), size k, sorted.
  std::vector<Element> subset(std::size_t n, std::size_t k) {
    std::set<Element> s;
    while (s.size() < std::min(k, n)) s.insert(static_cast<Element>(below(n)));
    return {s.begin(), s.end()};
  }

  // Distinct ids in [0, n), size k, in random order.
  std::vector<Element> tuple(std::size_t n, std::size_t k) {
    std::vector<Element> v = subset(n, k);
    std::shuffle(v.begin(), v.end(), rng_);
    return v;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<Element> ids(std::size_t n) {
  std::vector<Element> v(n);
  std::iota(v.begin(), v.end(), Element{0});
  return v;
}

}  // namespace freeact::testing
