#include <doctest.h>

#include "freeact/partial_automorphism.hpp"
#include "support.hpp"

using namespace freeact;
using namespace freeact::testing;

TEST_CASE("construction rejects non-bijections") {
  const std::vector<Element> d{1, 2, 3}, i{4, 5, 4}, short_i{4};
  CHECK_THROWS_AS(PartialAutomorphism(d, i), InvalidInput);
  CHECK_THROWS_AS(PartialAutomorphism(d, short_i), InvalidInput);
  const std::vector<Element> dup{1, 1}, img{2, 3};
  CHECK_THROWS_AS(PartialAutomorphism(dup, img), InvalidInput);
}

TEST_CASE("apply, inverse and prefixes agree") {
  Gen g(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<Element> d = g.tuple(100, 10), i = g.tuple(100, 10);
    const PartialAutomorphism m(d, i);
    const PartialAutomorphism inv = m.inverse();
    for (std::size_t k = 0; k < d.size(); ++k) {
      CHECK(m.apply(d[k]) == i[k]);
      CHECK(m.apply_inverse(i[k]) == d[k]);
      CHECK(inv.apply(i[k]) == d[k]);
    }
    const std::size_t cut = g.below(11);
    const PartialAutomorphism p = m.prefix(cut);
    CHECK(p.size() == cut);
    CHECK(m.extends(p));
    CHECK(inv.inverse() == m);
  }
}

TEST_CASE("extend is idempotent and refuses clashes") {
  PartialAutomorphism m;
  m.extend(1, 2);
  m.extend(1, 2);
  CHECK(m.size() == 1);
  CHECK_THROWS_AS(m.extend(1, 3), InvalidInput);
  CHECK_THROWS_AS(m.extend(4, 2), InvalidInput);
  CHECK(m.to_string() == "{1->2}");
}

TEST_CASE("type violations are found by direct comparison") {
  Gen g(2);
  auto o = make_oracle(OracleKind::RandomGraph);
  const std::size_t n = o->size();
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<Element> d = g.tuple(n, 4), i = g.tuple(n, 4);
    const PartialAutomorphism m(d, i);
    bool preserves = true;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        preserves = preserves && o->pair_code(d[a], d[b]) == o->pair_code(i[a], i[b]);
    CHECK(m.preserves_types(*o) == preserves);
    if (auto v = m.type_violation(*o))
      CHECK(o->pair_code(v->first, v->second) != o->pair_code(*m.apply(v->first), *m.apply(v->second)));
  }
  CHECK(PartialAutomorphism::identity(ids(n)).preserves_types(*o));
}
