#include "doctest.h"
#include "prisyn/stateset.hpp"

#include <random>

using namespace prisyn;

namespace {

constexpr int kVars = 4;

struct Fixture {
  VarDictionary dict;
  std::vector<BoolVar> v;
  Fixture() {
    for (int i = 0; i < kVars; ++i) v.push_back(dict.add("x" + std::to_string(i), VarRole::Data));
  }
  // Function over the unprimed variables from a 16-entry truth table.
  StateSet from_table(std::uint32_t table) const {
    StateSet s = dict.constant(false);
    for (std::uint32_t m = 0; m < (1u << kVars); ++m)
      if ((table >> m) & 1u) s |= dict.encode(v, m);
    return s;
  }
  std::uint32_t to_table(const StateSet& s) const {
    std::uint32_t t = 0;
    for (std::uint32_t m = 0; m < (1u << kVars); ++m)
      if (!(s & dict.encode(v, m)).is_false()) t |= 1u << m;
    return t;
  }
};

}  // namespace

TEST_CASE("boolean operators agree with truth tables") {
  Fixture f;
  std::mt19937 rng(11);
  for (int round = 0; round < 200; ++round) {
    const std::uint32_t a = rng() & 0xffff, b = rng() & 0xffff;
    const StateSet sa = f.from_table(a), sb = f.from_table(b);
    CHECK(f.to_table(sa & sb) == (a & b));
    CHECK(f.to_table(sa | sb) == (a | b));
    CHECK(f.to_table(sa ^ sb) == (a ^ b));
    CHECK(f.to_table(!sa) == (~a & 0xffff));
    CHECK(f.to_table(sa.minus(sb)) == (a & ~b));
    CHECK(sa.subset_of(sb) == ((a & ~b) == 0));
    CHECK(sa.intersects(sb) == ((a & b) != 0));
    CHECK((sa == sb) == (a == b));
    CHECK(sa.count(f.dict.unprimed()) == static_cast<double>(__builtin_popcount(a)));
  }
}

TEST_CASE("existential quantification") {
  Fixture f;
  std::mt19937 rng(5);
  const VarSet q = f.dict.make_set({f.v[1], f.v[3]});
  for (int round = 0; round < 100; ++round) {
    const std::uint32_t a = rng() & 0xffff;
    std::uint32_t expect = 0;
    for (std::uint32_t m = 0; m < 16; ++m)
      for (std::uint32_t flip : {0u, 2u, 8u, 10u})
        if ((a >> (m ^ flip)) & 1u) expect |= 1u << m;
    CHECK(f.to_table(f.from_table(a).exists(q)) == expect);
    const std::uint32_t b = rng() & 0xffff;
    CHECK(f.from_table(a).and_exists(f.from_table(b), q) == (f.from_table(a) & f.from_table(b)).exists(q));
  }
}

TEST_CASE("priming moves a set across the twin variables") {
  Fixture f;
  const StateSet x0 = f.dict.atom(f.v[0]);
  const StateSet x0p = f.dict.atom(f.v[0].twin());
  CHECK(f.v[0].twin().primed());
  CHECK(f.dict.name(f.v[0].twin()) == "x0'");
  CHECK((x0 & !f.dict.atom(f.v[2])).swap_primed() == (x0p & !f.dict.atom(f.v[2].twin())));
  CHECK(x0p.swap_primed() == x0);
  CHECK(f.dict.constant(true).swap_primed().is_true());
  CHECK_THROWS_AS((x0 & x0p).swap_primed(), std::invalid_argument);
}

TEST_CASE("enumeration is ordered, low branch first") {
  Fixture f;
  const VarSet two = f.dict.make_set({f.v[0], f.v[1]});
  std::vector<std::vector<bool>> seen;
  (f.dict.atom(f.v[0]) | f.dict.atom(f.v[1])).enumerate(two, [&](const std::vector<bool>& a) { seen.push_back(a); });
  CHECK(seen == std::vector<std::vector<bool>>{{false, true}, {true, false}, {true, true}});

  CHECK(f.dict.encode({f.v[0], f.v[1]}, 2) == ((!f.dict.atom(f.v[0])) & f.dict.atom(f.v[1])));
  CHECK((f.dict.atom(f.v[2]) & f.dict.atom(f.v[0])).support() ==
        std::vector<std::uint32_t>{f.v[0].level, f.v[2].level});
}

TEST_CASE("sets from different dictionaries do not mix") {
  Fixture f, g;
  CHECK_THROWS_AS(f.dict.atom(f.v[0]) & g.dict.atom(g.v[0]), std::invalid_argument);
  CHECK_THROWS_AS((void)(f.dict.atom(f.v[0]) == g.dict.atom(g.v[0])), std::invalid_argument);
}
