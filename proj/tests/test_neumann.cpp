#include <doctest.h>

#include <algorithm>

#include "freeact/neumann.hpp"
#include "support.hpp"

using namespace freeact;
using namespace freeact::testing;

namespace {

bool codes_preserved(const StructureOracle& o, const PartialAutomorphism& m) {
  const auto& d = m.domain();
  const auto& i = m.image();
  for (std::size_t a = 0; a < d.size(); ++a)
    for (std::size_t b = 0; b < d.size(); ++b)
      if (o.pair_code(d[a], d[b]) != o.pair_code(i[a], i[b])) return false;
  return true;
}

bool member(const std::vector<Element>& v, Element x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

TEST_CASE("separate moves A off B on random inputs") {
  for (OracleKind kind : kAllKinds) {
    auto o = make_oracle(kind, 7);
    Separator sep(*o);
    Gen g(100 + static_cast<int>(kind));
    const std::size_t n = o->size_at_level(o->params().level);
    for (int trial = 0; trial < 25; ++trial) {
      const std::vector<Element> A = g.subset(n, 1 + g.below(4));
      const std::vector<Element> B = g.subset(n, 1 + g.below(4));
      const SeparationWitness w = sep.separate(A, B);
      CHECK(recheck_witness(*o, w).ok);
      CHECK(codes_preserved(*o, w.mover));
      for (Element a : A) {
        REQUIRE(w.mover.apply(a).has_value());
        CHECK_FALSE(member(B, *w.mover.apply(a)));
      }
    }
  }
}

TEST_CASE("separate_over fixes B and meets A only in B") {
  for (OracleKind kind : kAllKinds) {
    auto o = make_oracle(kind, 8);
    Separator sep(*o);
    Gen g(200 + static_cast<int>(kind));
    const std::size_t n = o->size_at_level(o->params().level);
    for (int trial = 0; trial < 25; ++trial) {
      const std::vector<Element> C = g.subset(n, 1 + g.below(3));
      std::vector<Element> B;
      for (Element c : C)
        if (g.coin()) B.push_back(c);
      std::vector<Element> A = g.subset(n, 1 + g.below(3));
      if (!B.empty() && g.coin()) A.push_back(B.front());
      std::sort(A.begin(), A.end());
      A.erase(std::unique(A.begin(), A.end()), A.end());

      const SeparationWitness w = sep.separate_over(A, B, C);
      CHECK(recheck_witness(*o, w).ok);
      CHECK(codes_preserved(*o, w.mover));
      for (Element b : B) CHECK(w.mover.apply(b) == b);
      for (Element c : C) {
        const Element y = *w.mover.apply(c);
        if (member(A, y)) CHECK(member(B, y));
      }
    }
  }
}

TEST_CASE("separation rejects B outside C") {
  auto o = make_oracle(OracleKind::PureSet);
  const std::vector<Element> A{0}, B{5}, C{1, 2};
  CHECK_THROWS_AS(separate_over(*o, A, B, C), InvalidInput);
}

TEST_CASE("without construction an exhausted window raises ResourceLimit") {
  auto o = make_oracle(OracleKind::PureSet);
  SearchPolicy p;
  p.grow_steps = 0;
  p.allow_construct = false;
  Separator sep(*o, p);
  REQUIRE(sep.oracle_certified());
  const std::vector<Element> all = ids(o->size());
  const std::vector<Element> A{0};
  CHECK_THROWS_AS(sep.separate(A, all), ResourceLimit);
}

TEST_CASE("construction finds witnesses beyond the window") {
  auto o = make_oracle(OracleKind::RandomGraph);
  const std::vector<Element> all = ids(o->size());
  const std::vector<Element> A{0, 1, 2};
  const SeparationWitness w = separate(*o, A, all);
  CHECK(recheck_witness(*o, w).ok);
  for (Element a : A) CHECK(*w.mover.apply(a) >= all.size());
}

TEST_CASE("recheck catches a corrupted witness") {
  auto o = make_oracle(OracleKind::DenseLinearOrder);
  const std::vector<Element> A{0, 1}, B{0, 1, 2};
  SeparationWitness w = separate(*o, A, B);
  REQUIRE(recheck_witness(*o, w).ok);
  // Swapping the images reverses the order of the two points.
  const std::vector<Element> d = w.mover.domain();
  const std::vector<Element> swapped{w.mover.image()[1], w.mover.image()[0]};
  w.mover = PartialAutomorphism(d, swapped);
  CHECK_FALSE(recheck_witness(*o, w).ok);
  SeparationWitness hit = separate(*o, A, B);
  hit.avoided_set.push_back(hit.mover.image()[0]);
  std::sort(hit.avoided_set.begin(), hit.avoided_set.end());
  CHECK_FALSE(recheck_witness(*o, hit).ok);
}
