#pragma once

// Deterministic model generators: the two-resource example, dining
// philosophers, and random systems for property tests.

#include "prisyn/model.hpp"

#include <cstdint>
#include <string>

namespace prisyn {

/// Two components C1, C2 over idle/used; C1 runs a (acquire) and b
/// (release), C2 runs c and d. Risk: both used. C2 informs C1.
Model gen_fig1();

enum class Direction { Clockwise, CounterClockwise, None };

Direction parse_direction(const std::string& text);  // cw | ccw | none
const char* direction_name(Direction d);

struct PhilosopherParams {
  std::size_t n = 10;
  Direction direction = Direction::CounterClockwise;
};

/// Components Fork0, Phil0, Fork1, Phil1, ... Phil_i cycles
/// think -take_left_i-> hasLeft -take_right_i-> eat -release_i-> think.
/// take_left_i synchronizes with Fork_i, take_right_i with Fork_{i+1},
/// release_i with both forks. Forks cycle free/held. Risk is false, so
/// only deadlock is bad.
///
/// Communication is the mandatory architecture plus, for
/// counter-clockwise, Phil_i ⇝ Phil_{i+1}: a philosopher learns that its
/// left neighbour is about to take the shared fork. Clockwise adds
/// Phil_i ⇝ Phil_{i-1} instead. Throws std::invalid_argument if n < 2.
Model gen_philosophers(const PhilosopherParams& p);

struct RandomSizes {
  std::size_t max_components = 4;
  std::size_t max_locations = 3;
  std::size_t max_variables = 1;
  std::size_t max_interactions = 6;
  double priority_probability = 0.3;
  double extra_link_probability = 0.3;
};

/// Same seed, same model. The architecture is always deployable.
Model gen_random(std::uint64_t seed, const RandomSizes& sizes = {});

}  // namespace prisyn
