#pragma once

#include "prisyn/bench.hpp"
#include "prisyn/game.hpp"

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

namespace fixtures {

using prisyn::GameState;
using prisyn::System;

inline prisyn::Configuration config(const System& sys, std::initializer_list<const char*> locs) {
  prisyn::Configuration c;
  std::size_t i = 0;
  for (const char* l : locs) c.locations.push_back(static_cast<std::uint32_t>(*sys.components[i++].find_location(l)));
  c.values.assign(sys.total_variables(), 0);
  return c;
}

inline GameState ctrl(const System& sys, std::initializer_list<const char*> locs) {
  GameState s;
  s.control = true;
  s.bits.assign(sys.num_interactions(), false);
  s.config = config(sys, locs);
  return s;
}

inline GameState env(const System& sys, const char* chosen, std::initializer_list<const char*> bits,
                     std::initializer_list<const char*> locs) {
  GameState s;
  s.control = false;
  s.chosen = *sys.find_interaction(chosen);
  s.bits.assign(sys.num_interactions(), false);
  for (const char* b : bits) s.bits[*sys.find_interaction(b)] = true;
  s.config = config(sys, locs);
  return s;
}

inline std::set<GameState> as_set(const std::vector<GameState>& v) { return {v.begin(), v.end()}; }

inline prisyn::PrioritySet pairs(const System& sys, std::initializer_list<std::pair<const char*, const char*>> ps) {
  prisyn::PrioritySet out;
  for (auto [lo, hi] : ps) out.insert({*sys.find_interaction(lo), *sys.find_interaction(hi)});
  return out;
}

}  // namespace fixtures
