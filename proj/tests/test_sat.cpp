#include "doctest.h"
#include "oracle.hpp"
#include "prisyn/sat.hpp"

#include <algorithm>
#include <random>

using namespace prisyn;

namespace {

Cnf random_cnf(std::mt19937& rng, int vars, int clauses, int assumptions) {
  Cnf cnf;
  for (int v = 0; v < vars; ++v) cnf.new_var();
  std::uniform_int_distribution<int> var(1, vars), width(1, 3), sign(0, 1);
  for (int i = 0; i < clauses; ++i) {
    std::vector<Lit> c;
    for (int k = width(rng); k > 0; --k) c.push_back(sign(rng) ? var(rng) : -var(rng));
    cnf.add_clause(c);
  }
  for (int i = 0; i < assumptions; ++i) {
    const Lit a = sign(rng) ? var(rng) : -var(rng);
    if (std::find(cnf.assumptions.begin(), cnf.assumptions.end(), a) == cnf.assumptions.end())
      cnf.assumptions.push_back(a);
  }
  return cnf;
}

}  // namespace

TEST_CASE("small instances") {
  Cnf cnf;
  const int x = cnf.new_var(), y = cnf.new_var();
  cnf.add_clause({x, y});
  cnf.add_clause({-x, y});
  SatResult r = solve(cnf);
  REQUIRE(r.sat);
  CHECK(r.value(y));
  CHECK_FALSE(r.value(x));  // false is tried first
  CHECK(satisfies(cnf, r.model));

  cnf.assumptions = {-y};
  r = solve(cnf);
  CHECK_FALSE(r.sat);
  CHECK(r.core == std::vector<Lit>{-y});

  cnf.assumptions.clear();
  cnf.add_clause({-y});
  r = solve(cnf);
  CHECK_FALSE(r.sat);
  CHECK(r.core.empty());

  CHECK_THROWS_AS(cnf.add_clause({}), std::invalid_argument);
  CHECK_THROWS_AS(cnf.add_clause({3}), std::invalid_argument);
  CHECK(solve(Cnf{}).sat);
}

TEST_CASE("cores name only the assumptions that matter") {
  Cnf cnf;
  const int a = cnf.new_var(), b = cnf.new_var(), c = cnf.new_var();
  cnf.add_clause({-a, -b});
  cnf.assumptions = {c, a, b};
  const SatResult r = solve(cnf);
  REQUIRE_FALSE(r.sat);
  std::vector<Lit> core = r.core;
  std::sort(core.begin(), core.end());
  CHECK(core == std::vector<Lit>{a, b});
  CHECK(minimize_core(cnf, {a, b, c}) == std::vector<Lit>{a, b});
}

TEST_CASE("solver agrees with truth tables on random formulas") {
  std::mt19937 rng(2024);
  for (int round = 0; round < 400; ++round) {
    CAPTURE(round);
    const int vars = 1 + round % 10;
    const Cnf cnf = random_cnf(rng, vars, 1 + round % 30, round % 4);
    const SatResult r = solve(cnf);
    REQUIRE(r.sat == oracle::brute_force_sat(cnf, cnf.assumptions));
    if (r.sat) {
      CHECK(satisfies(cnf, r.model));
      for (Lit a : cnf.assumptions) CHECK(r.value(a));
      continue;
    }
    // The core is a subset of the assumptions, still unsatisfiable, and
    // minimal: dropping any member makes it satisfiable.
    for (Lit l : r.core)
      CHECK(std::find(cnf.assumptions.begin(), cnf.assumptions.end(), l) != cnf.assumptions.end());
    CHECK_FALSE(oracle::brute_force_sat(cnf, r.core));
    for (std::size_t i = 0; i < r.core.size(); ++i) {
      auto smaller = r.core;
      smaller.erase(smaller.begin() + static_cast<long>(i));
      CHECK(oracle::brute_force_sat(cnf, smaller));
    }
    // Without minimization the core is still a sound subset.
    const SatResult raw = solve(cnf, {.minimize_core = false});
    CHECK_FALSE(raw.sat);
    CHECK_FALSE(oracle::brute_force_sat(cnf, raw.core));
  }
}

TEST_CASE("DIMACS output") {
  Cnf cnf;
  cnf.new_var();
  cnf.new_var();
  cnf.add_clause({1, -2});
  cnf.add_clause({2});
  cnf.assumptions = {-1};
  CHECK(to_dimacs(cnf) == "c assume -1\np cnf 2 2\n1 -2 0\n2 0\n");
}
