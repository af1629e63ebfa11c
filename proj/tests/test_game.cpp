#include "doctest.h"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "prisyn/attractor.hpp"
#include "prisyn/bench.hpp"
#include "prisyn/game.hpp"

using namespace prisyn;

namespace {

std::set<GameState> control_successors(const GameEncoding& enc, const Configuration& c) {
  const StateSet src = state_predicate(enc, oracle::control_state(enc.system, c));
  std::set<GameState> out;
  for (const auto& m : decode_moves(enc, enc.t_ctrl & src)) out.insert(m.to);
  return out;
}

bool holds_at(const GameEncoding& enc, const StateSet& s, const GameState& g) {
  return s.intersects(state_predicate(enc, g));
}

}  // namespace

TEST_CASE("control moves stamp the chosen interaction and the visible enabled bits") {
  const Model m = gen_fig1();
  const System& sys = m.system;
  const GameEncoding enc = encode(sys, compute_visibility(sys, m.architecture));

  const auto moves = control_successors(enc, fixtures::config(sys, {"idle", "idle"}));
  CHECK(moves == std::set<GameState>{fixtures::env(sys, "a", {"a", "c"}, {"idle", "idle"}),
                                     fixtures::env(sys, "c", {"c"}, {"idle", "idle"})});
  CHECK(format_state(enc, fixtures::env(sys, "a", {"a", "c"}, {"idle", "idle"})) == "env a {a,c} (idle,idle | )");
  CHECK(format_state(enc, fixtures::ctrl(sys, {"used", "idle"})) == "ctrl (used,idle | )");

  // The environment executes the stamped interaction and hands back control.
  const StateSet after = post_image(enc, state_predicate(enc, fixtures::env(sys, "a", {"a", "c"}, {"idle", "idle"})));
  CHECK(fixtures::as_set(decode_states(enc, after)) == std::set<GameState>{fixtures::ctrl(sys, {"used", "idle"})});
  CHECK(holds_at(enc, enc.init, fixtures::ctrl(sys, {"idle", "idle"})));
}

TEST_CASE("applying a priority removes dominated choices and clears dominated bits") {
  const Model m = gen_fig1();
  const System& sys = m.system;
  const GameEncoding base = encode(sys, compute_visibility(sys, m.architecture));
  const GameEncoding enc = apply_priority(base, {*sys.find_interaction("a"), *sys.find_interaction("c")});
  CHECK(enc.applied.size() == 1);
  // a is dominated by the visibly enabled c; choosing c still raises only c.
  CHECK(control_successors(enc, fixtures::config(sys, {"idle", "idle"})) ==
        std::set<GameState>{fixtures::env(sys, "c", {"c"}, {"idle", "idle"})});

  // c < a: c is not visible to a, so a's move keeps a and clears c.
  const GameEncoding rev = apply_priority(base, {*sys.find_interaction("c"), *sys.find_interaction("a")});
  CHECK(control_successors(rev, fixtures::config(sys, {"idle", "idle"})) ==
        std::set<GameState>{fixtures::env(sys, "a", {"a"}, {"idle", "idle"}),
                            fixtures::env(sys, "c", {"c"}, {"idle", "idle"})});
}

TEST_CASE("risk and deadlock predicates live on control states") {
  const Model m = gen_fig1();
  const System& sys = m.system;
  const GameEncoding enc = encode(sys, compute_visibility(sys, m.architecture));
  CHECK(holds_at(enc, risk_predicate(enc), fixtures::ctrl(sys, {"used", "used"})));
  CHECK_FALSE(holds_at(enc, risk_predicate(enc), fixtures::env(sys, "b", {"b", "d"}, {"used", "used"})));
  CHECK_FALSE(holds_at(enc, risk_predicate(enc), fixtures::ctrl(sys, {"used", "idle"})));
  CHECK((enc.c_dead & enc.valid).is_false());
  CHECK(bad_states(enc) == risk_predicate(enc));
}

TEST_CASE("empty alphabets cannot be encoded") {
  System sys;
  sys.finalize();
  CHECK_THROWS_AS(encode(sys, VisTable(0)), std::invalid_argument);
}

TEST_CASE("symbolic game agrees with the explicit rules on random systems") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CAPTURE(seed);
    const Model m = gen_random(seed);
    const System& sys = m.system;
    const VisTable vis = compute_visibility(sys, m.architecture);
    const GameEncoding enc = encode(sys, vis);

    for (const auto& c : oracle::all_configurations(sys)) {
      const GameState cs = oracle::control_state(sys, c);
      CHECK(holds_at(enc, enc.c_dead, cs) == is_deadlock(sys, c));
      CHECK(holds_at(enc, risk_predicate(enc), cs) == is_risk(sys, c));
      CHECK(control_successors(enc, c) == fixtures::as_set(oracle::control_moves(sys, vis, c)));

      std::set<GameState> two;
      for (const auto& g : decode_states(enc, post_image(enc, post_image(enc, state_predicate(enc, cs)))))
        two.insert(g);
      std::set<GameState> expect;
      for (auto s : enabled(sys, c))
        for (const auto& n : step(sys, c, s)) expect.insert(oracle::control_state(sys, n));
      CHECK(two == expect);
    }

    const oracle::Graph g = oracle::build_game(sys, vis);
    const StateSet reach = reachable_states(enc, bad_states(enc));
    CHECK(fixtures::as_set(decode_states(enc, reach)) == std::set<GameState>(g.nodes.begin(), g.nodes.end()));
  }
}

TEST_CASE("the variable order can be overridden without changing the game") {
  const Model m = gen_philosophers({3, Direction::CounterClockwise});
  const System& sys = m.system;
  const VisTable vis = compute_visibility(sys, m.architecture);
  EncodeOptions opts;
  for (std::size_t c = sys.components.size(); c-- > 0;) opts.component_order.push_back(c);
  const GameEncoding a = encode(sys, vis);
  const GameEncoding b = encode(sys, vis, opts);
  const auto ra = decode_states(a, reachable_states(a, bad_states(a)));
  const auto rb = decode_states(b, reachable_states(b, bad_states(b)));
  CHECK(fixtures::as_set(ra) == fixtures::as_set(rb));
  CHECK(export_dot(a, reachable_states(a)).rfind("digraph game {", 0) == 0);
}
