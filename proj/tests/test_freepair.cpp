#include <doctest.h>

#include <set>

#include "freeact/freepair.hpp"
#include "support.hpp"

using namespace freeact;
using namespace freeact::testing;

namespace {

// Partial permutation as a plain lookup table, -1 where undefined.
using Table = std::vector<int>;

int step(const Table& f, const Table& f_inv, Letter l, const Table& g, const Table& g_inv, int x) {
  if (x < 0) return -1;
  switch (l) {
    case Letter::A: return f[x];
    case Letter::AInv: return f_inv[x];
    case Letter::B: return g[x];
    case Letter::BInv: return g_inv[x];
  }
  return -1;
}

Table invert(const Table& f) {
  Table inv(f.size(), -1);
  for (std::size_t x = 0; x < f.size(); ++x)
    if (f[x] >= 0) inv[static_cast<std::size_t>(f[x])] = static_cast<int>(x);
  return inv;
}

PartialAutomorphism from_table(const Table& f) {
  PartialAutomorphism m;
  for (std::size_t x = 0; x < f.size(); ++x)
    if (f[x] >= 0) m.extend(static_cast<Element>(x), static_cast<Element>(f[x]));
  return m;
}

Table random_partial(Gen& g, std::size_t n) {
  std::vector<Element> perm = g.tuple(n, n);
  Table f(n, -1);
  for (std::size_t x = 0; x < n; ++x)
    if (g.below(4) != 0) f[x] = static_cast<int>(perm[x]);
  return f;
}

std::size_t brute_force_violations(const Table& f, const Table& g, std::size_t L, std::size_t& defined) {
  const Table fi = invert(f), gi = invert(g);
  std::size_t bad = 0;
  defined = 0;
  for (const ReducedWord& w : reduced_words(L))
    for (int x = 0; x < static_cast<int>(f.size()); ++x) {
      int y = x;
      for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) y = step(f, fi, *it, g, gi, y);
      if (y < 0) continue;
      ++defined;
      bad += y == x;
    }
  return bad;
}

}  // namespace

TEST_CASE("reduced words are counted and ordered") {
  for (std::size_t L = 1; L <= 7; ++L) {
    std::size_t expected = 0, p = 1;
    for (std::size_t l = 1; l <= L; ++l, p *= 3) expected += 4 * p;
    CHECK(reduced_word_count(L) == expected);
    const std::vector<ReducedWord> ws = reduced_words(L);
    REQUIRE(ws.size() == expected);
    std::set<std::string> distinct;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      distinct.insert(ws[i].to_string());
      const auto& ls = ws[i].letters();
      for (std::size_t k = 1; k < ls.size(); ++k) CHECK(ls[k] != inverse(ls[k - 1]));
      if (i > 0) CHECK(ws[i - 1].size() <= ws[i].size());
    }
    CHECK(distinct.size() == expected);
  }
  CHECK(reduced_word_count(8) == 4 * (6561 - 1) / 2);
}

TEST_CASE("word text round-trips and rejects cancellation") {
  CHECK(ReducedWord::parse("abAB").to_string() == "abAB");
  CHECK_THROWS_AS(ReducedWord::parse("aA"), InvalidInput);
  CHECK_THROWS_AS(ReducedWord::parse(""), InvalidInput);
  CHECK_THROWS_AS(ReducedWord::parse("ax"), InvalidInput);
}

TEST_CASE("apply_word composes right to left") {
  Gen g(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Table f = random_partial(g, 12), h = random_partial(g, 12);
    const Table fi = invert(f), hi = invert(h);
    const FreePair pair{from_table(f), from_table(h)};
    for (const ReducedWord& w : reduced_words(4))
      for (int x = 0; x < 12; ++x) {
        int y = x;
        for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) y = step(f, fi, *it, h, hi, y);
        const auto got = apply_word(w, pair, static_cast<Element>(x));
        CHECK(got.has_value() == (y >= 0));
        if (got) CHECK(static_cast<int>(*got) == y);
      }
  }
}

TEST_CASE("fixed point checker matches brute force") {
  Gen g(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Table f = random_partial(g, 9), h = random_partial(g, 9);
    const FreePair pair{from_table(f), from_table(h)};
    std::size_t defined = 0;
    const std::size_t bad = brute_force_violations(f, h, 5, defined);
    const FixedPointReport rep = check_fixed_points(pair, 5, ids(9));
    CHECK(rep.violation_count == bad);
    CHECK(rep.defined == defined);
    CHECK(rep.evaluations == reduced_word_count(5) * 9);
  }
}

TEST_CASE("a transposition pair has fixed points and a cyclic ball") {
  // a swaps 0 and 1, so a^2 fixes both; b swaps 2 and 3.
  const FreePair pair{PartialAutomorphism(std::vector<Element>{0, 1}, std::vector<Element>{1, 0}),
                      PartialAutomorphism(std::vector<Element>{2, 3}, std::vector<Element>{3, 2})};
  const FixedPointReport rep = check_fixed_points(pair, 2, ids(4));
  CHECK_FALSE(rep.clean());
  CHECK(rep.violations.front().word.size() == 2);
  const SchreierBall ball = schreier_ball(pair, 0, 2);
  CHECK_FALSE(ball.is_tree_ball());
}

TEST_CASE("built pairs are free, fresh and type preserving on every oracle") {
  for (OracleKind kind : kAllKinds)
    for (std::uint64_t seed : {1u, 2u}) {
      auto o = make_oracle(kind, seed);
      const BuildResult b = build(*o, 6, 6);
      CHECK(b.fixed_points.clean());
      CHECK(b.fixed_points.points == o->size());
      CHECK(b.steps.size() == 24);
      CHECK(b.pair.phi.preserves_types(*o));
      CHECK(b.pair.gamma.preserves_types(*o));
      for (const ExtensionRecord& r : b.steps) CHECK(freshness_ledger(b.pair, r).holds);
      // Back-and-forth covers the least ids in every domain and image.
      for (Element x = 0; x < 6; ++x) {
        CHECK(b.pair.phi.in_domain(x));
        CHECK(b.pair.phi.in_image(x));
        CHECK(b.pair.gamma.in_domain(x));
        CHECK(b.pair.gamma.in_image(x));
      }
    }
}

TEST_CASE("the initial maps are single points with disjoint supports") {
  auto o = make_oracle(OracleKind::RandomGraph);
  FreePairBuilder b(*o);
  REQUIRE(b.pair().phi.size() == 1);
  REQUIRE(b.pair().gamma.size() == 1);
  CHECK(covered_points(b.pair()).size() == 4);
  CHECK(b.pair().phi.domain()[0] == 0);
}

TEST_CASE("the freshness ledger detects a reused image") {
  // phi grew from {0->1} to {0->1, 2->3}; 3 was already gamma's domain.
  const FreePair pair{PartialAutomorphism(std::vector<Element>{0, 2}, std::vector<Element>{1, 3}),
                      PartialAutomorphism(std::vector<Element>{3}, std::vector<Element>{4})};
  ExtensionRecord r;
  r.side = Side::Phi;
  r.direction = Direction::Domain;
  r.phi_before = 1;
  r.gamma_before = 1;
  r.after = 2;
  const FreshnessLedger f = freshness_ledger(pair, r);
  CHECK_FALSE(f.holds);
  CHECK(f.D == std::vector<Element>{1, 3});
  const FreePair ok{pair.phi, PartialAutomorphism(std::vector<Element>{5}, std::vector<Element>{4})};
  CHECK(freshness_ledger(ok, r).holds);
  r.after = 3;
  CHECK_THROWS_AS(freshness_ledger(pair, r), InvalidInput);
}

TEST_CASE("extending for a ball yields tree balls of the right size") {
  auto o = make_oracle(OracleKind::DenseLinearOrder, 3);
  FreePairBuilder b(*o, BuilderConfig{6, {}});
  b.run_rounds(3);
  for (std::size_t r = 1; r <= 4; ++r) {
    const SchreierBall ball = schreier_ball(b, 0, r);
    CHECK(ball.is_tree_ball());
    std::size_t p = 1;
    for (std::size_t i = 0; i < r; ++i) p *= 3;
    CHECK(ball.vertices.size() == 2 * p - 1);
    CHECK(ball.edges.size() == ball.vertices.size() - 1);
  }
  const std::vector<Element> pts = covered_points(b.pair());
  CHECK(check_fixed_points(b.pair(), 6, pts).clean());
}

TEST_CASE("tower maps fix a class of every domain point") {
  auto o = make_oracle(OracleKind::EquivTower);
  const BuildResult b = build(*o, 5, 6);
  REQUIRE(b.fixed_points.clean());
  for (const PartialAutomorphism* m : {&b.pair.phi, &b.pair.gamma})
    for (Element x : m->domain()) {
      const Element y = *m->apply(x);
      const PairCode mask = o->pair_code(x, y) >> 1;
      std::size_t n = 1;
      while (mask & (PairCode{1} << (n - 1))) ++n;
      const ImaginaryClass c = tower_fixed_class(*o, *m, x);
      CHECK(c.n == n);
      CHECK(c.n < 64);
      CHECK(same_class(*o, c, ImaginaryClass{n, y}));
    }
}

TEST_CASE("the tower demo finds no separating candidate") {
  auto o = make_oracle(OracleKind::EquivTower);
  for (std::size_t depth = 1; depth <= 2; ++depth) {
    const TowerDemoReport r = tower_neumann_failure_demo(*o, 1, depth);
    CHECK(r.failure_confirmed());
    CHECK(r.home_sort_separated);
    std::size_t total = 0;
    for (std::size_t h : r.histogram) total += h;
    CHECK(total == r.candidates);
  }
}
