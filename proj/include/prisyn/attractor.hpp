#pragma once

// Risk attractor, nested risk attractor and the boundary transitions T_f.

#include "prisyn/game.hpp"

namespace prisyn {

struct AttractorResult {
  StateSet nested;    // nested risk attractor
  StateSet boundary;  // T_f: control moves from outside `nested` into it
  StateSet plain;     // attractor of the original bad set
  std::size_t iterations = 0;
};

/// Least fixpoint of X ↦ X ∪ env-pre(X) ∪ forced control-pre(X). Control
/// states without moves are never forced.
StateSet risk_attractor(const StateSet& bad, const GameEncoding& enc);

/// Control moves whose chosen interaction is the only interaction bit set.
StateSet esc_predicate(const GameEncoding& enc);

/// Iterate the attractor, condemning sources of boundary moves that have no
/// visible escape (all boundary sources when `over_approx`), to a fixpoint.
AttractorResult nested_risk_attractor(const GameEncoding& enc, const StateSet& bad, bool over_approx);

enum class Feasibility { Feasible, Infeasible };

/// Infeasible iff the initial state lies in the nested attractor.
Feasibility check_feasible(const GameEncoding& enc, const AttractorResult& r);

/// Pruned game and its attractor analysis. Bad states are reachability
/// sinks: nothing past them is explored.
struct Diagnosis {
  GameEncoding game;  // transitions restricted to `reach`
  StateSet reach;
  StateSet bad;       // bad ∧ reach
  AttractorResult attractor;

  bool safe() const { return bad.is_false(); }
  bool init_lost() const { return game.init.subset_of(attractor.nested); }
};

Diagnosis diagnose(const GameEncoding& enc, bool over_approx = false);

}  // namespace prisyn
