#include "prisyn/attractor.hpp"

namespace prisyn {

StateSet risk_attractor(const StateSet& bad, const GameEncoding& enc) {
  const StateSet p0 = enc.control();
  const StateSet movable = enc.t_ctrl.exists(enc.primed);
  StateSet x = bad;
  for (;;) {
    const StateSet xp = x.swap_primed();
    const StateSet env_pre = (!p0) & enc.t_env.and_exists(xp, enc.primed);
    const StateSet forced = p0 & movable & !enc.t_ctrl.and_exists(!xp, enc.primed);
    const StateSet next = x | env_pre | forced;
    if (next == x) return x;
    x = next;
  }
}

StateSet esc_predicate(const GameEncoding& enc) {
  StateSet esc = enc.dict.constant(false);
  for (InteractionId s = 0; s < enc.bits.size(); ++s) {
    StateSet t = enc.chosen_is(s, true) & enc.dict.atom(enc.bits[s].twin());
    for (InteractionId tau = 0; tau < enc.bits.size(); ++tau)
      if (tau != s) t &= !enc.dict.atom(enc.bits[tau].twin());
    esc |= t;
  }
  return esc;
}

AttractorResult nested_risk_attractor(const GameEncoding& enc, const StateSet& bad, bool over_approx) {
  const StateSet esc = esc_predicate(enc);
  AttractorResult r;
  StateSet attr = risk_attractor(bad, enc);
  r.plain = attr;
  r.iterations = 1;
  for (;;) {
    const StateSet into = enc.t_ctrl & attr.swap_primed() & !attr;
    const StateSet condemned = over_approx ? into.exists(enc.primed) : (into & esc).exists(enc.primed);
    if (condemned.subset_of(attr)) break;
    // The attractor is a closure operator, so seeding with attr is exact.
    attr = risk_attractor(attr | condemned, enc);
    ++r.iterations;
  }
  r.nested = attr;
  r.boundary = enc.t_ctrl & attr.swap_primed() & !attr;
  return r;
}

Feasibility check_feasible(const GameEncoding& enc, const AttractorResult& r) {
  return enc.init.subset_of(r.nested) ? Feasibility::Infeasible : Feasibility::Feasible;
}

Diagnosis diagnose(const GameEncoding& enc, bool over_approx) {
  const StateSet all_bad = bad_states(enc);
  const StateSet reach = reachable_states(enc, all_bad);
  Diagnosis d{restrict_to(enc, reach), reach, all_bad & reach, {}};
  d.attractor = nested_risk_attractor(d.game, d.bad, over_approx);
  return d;
}

}  // namespace prisyn
