#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "freeact/closure.hpp"
#include "support.hpp"

using namespace freeact;
using namespace freeact::testing;

namespace {

// Orbit count of injective n-tuples over the empty base by brute force:
// two tuples share an orbit iff all their pairwise codes agree.
std::size_t brute_orbits(const StructureOracle& o, std::size_t window, std::size_t n) {
  std::set<std::vector<PairCode>> seen;
  std::vector<Element> t(n);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      std::vector<PairCode> key;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (a != b) key.push_back(o.pair_code(t[a], t[b]));
      seen.insert(std::move(key));
      return;
    }
    for (Element x = 0; x < window; ++x) {
      if (std::find(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i), x) != t.begin() + static_cast<std::ptrdiff_t>(i))
        continue;
      t[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return seen.size();
}

// Order patterns of DLO triples, read off the rank of each entry.
std::size_t dlo_patterns(const StructureOracle& o, std::size_t window) {
  std::set<std::vector<int>> seen;
  for (Element a = 0; a < window; ++a)
    for (Element b = 0; b < window; ++b)
      for (Element c = 0; c < window; ++c) {
        if (a == b || b == c || a == c) continue;
        const Element t[] = {a, b, c};
        std::vector<int> rank(3, 0);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            if (o.pair_code(t[j], t[i]) == 1) ++rank[i];
        seen.insert(rank);
      }
  return seen.size();
}

}  // namespace

TEST_CASE("orbit counts match brute force") {
  const std::map<OracleKind, std::vector<std::size_t>> expected{
      {OracleKind::RandomGraph, {1, 2, 8}},
      {OracleKind::DenseLinearOrder, {1, 2, 6}},
      {OracleKind::PureSet, {1, 1, 1}}};
  for (OracleKind kind : kAllKinds) {
    auto o = make_oracle(kind);
    const std::size_t level = o->params().level;
    const std::size_t w = o->size_at_level(level);
    for (std::size_t n = 1; n <= 3; ++n) {
      const OrbitPartition p = orbit_partition(*o, {}, n, level, TupleView::Injective);
      CHECK(p.class_count() == brute_orbits(*o, w, n));
      if (auto it = expected.find(kind); it != expected.end()) CHECK(p.class_count() == it->second[n - 1]);
      std::size_t total = 0;
      for (const auto& c : p.classes) total += c.count;
      CHECK(total == p.tuple_count);
    }
  }
  auto dlo = make_oracle(OracleKind::DenseLinearOrder);
  CHECK(dlo_patterns(*dlo, dlo->size()) == 6);
}

TEST_CASE("orbit partition over a base refines by type and locates tuples") {
  Gen g(3);
  auto o = make_oracle(OracleKind::RandomGraph);
  const std::vector<Element> base{0, 1};
  const OrbitPartition p = orbit_partition(*o, base, 1, o->params().level, TupleView::All);
  // Over two points: each of the 2 points itself, plus 4 adjacency patterns.
  CHECK(p.class_count() == 6);
  for (int trial = 0; trial < 20; ++trial) {
    const Element x = static_cast<Element>(g.below(p.window_size));
    const std::size_t k = p.class_of(*o, std::vector<Element>{x});
    REQUIRE(k != OrbitPartition::npos);
    std::vector<Element> t = base;
    t.push_back(x);
    CHECK(p.classes[k].type == o->qf_type(t));
  }
}

TEST_CASE("acl of small sets is trivial with growing class certificates") {
  Gen g(21);
  for (OracleKind kind : kAllKinds) {
    auto o = make_oracle(kind, 2);
    for (int trial = 0; trial < 6; ++trial) {
      const std::vector<Element> base = g.subset(o->size_at_level(o->params().level), g.below(4));
      const AclResult r = acl(*o, base);
      REQUIRE(r.certified());
      CHECK(r.members == base);
      for (const ClassCertificate& c : r.classes) {
        CHECK(c.verdict == ClassCertificate::Verdict::Infinite);
        CHECK(c.growth_steps() >= 2);
        CHECK(c.sizes.size() == c.levels.size());
        CHECK(std::is_sorted(c.sizes.begin(), c.sizes.end()));
      }
    }
  }
}

TEST_CASE("acl probes the least tuple of the same type") {
  auto o = make_oracle(OracleKind::DenseLinearOrder);
  const std::vector<Element> base{static_cast<Element>(o->size() - 1)};
  const AclResult r = acl(*o, base);
  REQUIRE(r.certified());
  REQUIRE(r.probe_base.size() == 1);
  CHECK(r.probe_base[0] == 0);
  CHECK(r.members == base);
}

TEST_CASE("no algebraicity holds on every oracle") {
  for (OracleKind kind : kAllKinds) {
    auto o = make_oracle(kind);
    const NoAlgebraicityReport rep = assert_no_algebraicity(*o, 12, o->params().level, 5);
    CHECK(rep.passed);
    CHECK(rep.samples.size() == 12);
    CHECK(rep.samples.front().base.empty());
    CHECK(rep.min_growth_steps >= 2);
  }
}

TEST_CASE("closure certificates use probes for small sets") {
  auto o = make_oracle(OracleKind::PureSet);
  const std::vector<Element> small{3, 4};
  const ClosureCertificate c = certify_closed(*o, small, true);
  CHECK(c.closed);
  CHECK(c.basis == ClosureCertificate::Basis::Probed);
  const std::vector<Element> large{0, 1, 2, 3, 4, 5, 6};
  const ClosureCertificate d = certify_closed(*o, large, true);
  CHECK(d.closed);
  CHECK(d.basis == ClosureCertificate::Basis::Structural);
  CHECK_FALSE(certify_closed(*o, large, false).closed);
}
