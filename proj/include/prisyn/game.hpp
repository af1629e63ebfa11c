#pragma once

// Symbolic two-player safety game of a System under a visibility table.
//
// Control states (p0 = 1) hold a configuration with the chosen-interaction
// bits A and all interaction bits false. A control move picks an enabled
// interaction σ, stamps enc(σ) into A and sets every other interaction
// bit to "enabled and visible to σ's executors". The environment then
// executes σ, restores p0 and clears A and the interaction bits.

#include "prisyn/explicit.hpp"
#include "prisyn/model.hpp"
#include "prisyn/stateset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace prisyn {

struct EncodeOptions {
  /// Component order for the variable order; empty = declaration order.
  std::vector<ComponentId> component_order;
};

struct GameEncoding {
  System system;
  VisTable vis;
  VarDictionary dict;

  BoolVar turn;                                   // p0
  std::vector<BoolVar> chosen;                    // A, least significant bit first
  std::vector<BoolVar> bits;                      // one per interaction
  std::vector<std::vector<BoolVar>> locations;    // per component, LSB first
  std::vector<std::vector<BoolVar>> data;         // per component variable

  StateSet t_ctrl;
  StateSet t_env;
  StateSet c_dead;
  StateSet init;
  StateSet valid;                                 // legal location codes
  std::vector<StateSet> p_enabled;                // P_σ over unprimed variables
  PrioritySet applied;

  VarSet unprimed;
  VarSet primed;

  /// enc(σ) over A (or A′).
  StateSet chosen_is(InteractionId s, bool primed_vars = false) const;
  /// A = 0 and every interaction bit false.
  StateSet bits_clear(bool primed_vars = false) const;
  /// Location and data bits of `c`.
  StateSet configuration(const Configuration& c, bool primed_vars = false) const;
  StateSet control() const { return dict.atom(turn); }
};

/// Build the game and fold apply_priority over System.priorities. Throws
/// std::invalid_argument for an empty alphabet.
GameEncoding encode(const System& sys, const VisTable& vis, const EncodeOptions& opts = {});

/// Remove control moves choosing `p.low` while `p.high` is visibly enabled
/// and clear the `p.low` bit on every other move where both bits are set.
GameEncoding apply_priority(GameEncoding enc, Priority p);

/// One forward step under t_ctrl ∨ t_env.
StateSet post_image(const GameEncoding& enc, const StateSet& from);

/// Least fixpoint of the forward image from init. States in `stop` are
/// included but not expanded.
StateSet reachable_states(const GameEncoding& enc);
StateSet reachable_states(const GameEncoding& enc, const StateSet& stop);

/// Risk expression over location/data bits, conjoined with p0.
StateSet risk_predicate(const GameEncoding& enc);
/// (risk ∨ c_dead) ∧ p0.
StateSet bad_states(const GameEncoding& enc);

/// Transition relations restricted to sources in `reach`.
GameEncoding restrict_to(GameEncoding enc, const StateSet& reach);

struct GameState {
  bool control = true;
  std::size_t chosen = 0;         // raw value of A
  std::vector<bool> bits;
  Configuration config;           // raw location codes

  auto operator<=>(const GameState&) const = default;
  bool operator==(const GameState&) const = default;
};

struct GameMove {
  GameState from;
  GameState to;
  auto operator<=>(const GameMove&) const = default;
  bool operator==(const GameMove&) const = default;
};

StateSet state_predicate(const GameEncoding& enc, const GameState& s, bool primed_vars = false);
std::vector<GameState> decode_states(const GameEncoding& enc, const StateSet& s);
/// Decode a relation over unprimed and primed variables.
std::vector<GameMove> decode_moves(const GameEncoding& enc, const StateSet& rel);
std::string format_state(const GameEncoding& enc, const GameState& s);

/// Graphviz rendering of the explicit game graph over `reach`.
std::string export_dot(const GameEncoding& enc, const StateSet& reach);

}  // namespace prisyn
