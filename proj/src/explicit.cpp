#include "prisyn/explicit.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>
#include <unordered_map>

namespace prisyn {

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (auto l : c.locations) mix(l);
  mix(0xff);
  for (auto v : c.values) mix(v);
  return static_cast<std::size_t>(h);
}

Configuration initial_configuration(const System& sys) {
  Configuration c;
  for (const auto& comp : sys.components) {
    c.locations.push_back(static_cast<std::uint32_t>(comp.initial_location));
    for (bool v : comp.initial_values) c.values.push_back(v ? 1 : 0);
  }
  return c;
}

bool atom_holds(const System& sys, const Configuration& c, const Atom& a) {
  switch (a.kind) {
    case AtomKind::Location: return c.locations[a.component] == a.index;
    case AtomKind::Variable: return c.values[sys.var_offset(a.component) + a.index] != 0;
    case AtomKind::Unresolved: break;
  }
  throw std::logic_error("unresolved atom '" + a.text + "'");
}

bool is_risk(const System& sys, const Configuration& c) {
  return sys.risk.evaluate([&](const Atom& a) { return atom_holds(sys, c, a); });
}

namespace {

bool guard_holds(const System& sys, const Configuration& c, const Transition& t) {
  return t.guard.evaluate([&](const Atom& a) { return atom_holds(sys, c, a); });
}

bool component_ready(const System& sys, const Configuration& c, ComponentId ci, InteractionId s) {
  for (const auto& t : sys.components[ci].transitions)
    if (t.label == s && t.source == c.locations[ci] && guard_holds(sys, c, t)) return true;
  return false;
}

}  // namespace

std::vector<bool> joint_participation(const System& sys, const Configuration& c) {
  std::vector<bool> out(sys.num_interactions(), false);
  for (InteractionId s = 0; s < sys.num_interactions(); ++s) {
    bool ok = !sys.participants(s).empty();
    for (ComponentId ci : sys.participants(s)) ok = ok && component_ready(sys, c, ci, s);
    out[s] = ok;
  }
  return out;
}

bool is_deadlock(const System& sys, const Configuration& c) {
  const auto jp = joint_participation(sys, c);
  return std::none_of(jp.begin(), jp.end(), [](bool b) { return b; });
}

std::vector<InteractionId> enabled(const System& sys, const Configuration& c) {
  const auto jp = joint_participation(sys, c);
  std::vector<InteractionId> out;
  for (InteractionId s = 0; s < jp.size(); ++s) {
    if (!jp[s]) continue;
    bool suppressed = false;
    for (const auto& p : sys.priorities)
      if (p.low == s && jp[p.high]) suppressed = true;
    if (!suppressed) out.push_back(s);
  }
  return out;
}

std::vector<InteractionId> dist_enabled(const System& sys, const CommArchitecture& com,
                                        const Configuration& c) {
  auto visible_by = [&](InteractionId s, ComponentId j) {
    for (ComponentId i : sys.participants(s))
      if (!com.informs(i, j)) return false;
    return true;
  };
  const auto jp = joint_participation(sys, c);
  std::vector<InteractionId> out;
  for (InteractionId s = 0; s < sys.num_interactions(); ++s) {
    bool ok = !sys.participants(s).empty();
    for (ComponentId ci : sys.participants(s))
      ok = ok && visible_by(s, ci) && component_ready(sys, c, ci, s);
    if (!ok) continue;
    for (const auto& p : sys.priorities) {
      if (p.low != s || !jp[p.high]) continue;
      for (ComponentId ci : sys.participants(s))
        if (visible_by(p.high, ci)) ok = false;
    }
    if (ok) out.push_back(s);
  }
  return out;
}

std::vector<Configuration> successors(const System& sys, const Configuration& c, InteractionId sigma) {
  const auto& parts = sys.participants(sigma);
  std::vector<std::vector<const Transition*>> choices;
  for (ComponentId ci : parts) {
    std::vector<const Transition*> ready;
    for (const auto& t : sys.components[ci].transitions)
      if (t.label == sigma && t.source == c.locations[ci] && guard_holds(sys, c, t)) ready.push_back(&t);
    if (ready.empty()) return {};
    choices.push_back(std::move(ready));
  }

  std::vector<Configuration> out;
  std::vector<const Transition*> picked(parts.size());

  // Expand variable updates of the picked transitions, one variable at a time.
  struct Slot {
    std::size_t flat;
    Update update;
  };
  auto expand_updates = [&](Configuration next) {
    std::vector<Slot> slots;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const ComponentId ci = parts[k];
      next.locations[ci] = static_cast<std::uint32_t>(picked[k]->target);
      for (std::size_t v = 0; v < picked[k]->updates.size(); ++v)
        slots.push_back({sys.var_offset(ci) + v, picked[k]->updates[v]});
    }
    std::vector<Configuration> acc{std::move(next)};
    for (const auto& s : slots) {
      if (s.update == Update::Keep) continue;
      if (s.update != Update::Any) {
        for (auto& a : acc) a.values[s.flat] = s.update == Update::SetTrue ? 1 : 0;
        continue;
      }
      std::vector<Configuration> grown;
      grown.reserve(acc.size() * 2);
      for (auto& a : acc) {
        a.values[s.flat] = 0;
        grown.push_back(a);
        a.values[s.flat] = 1;
        grown.push_back(std::move(a));
      }
      acc = std::move(grown);
    }
    for (auto& a : acc) out.push_back(std::move(a));
  };

  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == parts.size()) {
      expand_updates(c);
      return;
    }
    for (const Transition* t : choices[k]) {
      picked[k] = t;
      self(self, k + 1);
    }
  };
  rec(rec, 0);

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Configuration> step(const System& sys, const Configuration& c, InteractionId sigma) {
  const auto en = enabled(sys, c);
  if (!std::binary_search(en.begin(), en.end(), sigma))
    throw std::invalid_argument("interaction " + sys.alphabet.at(sigma) + " is not enabled");
  return successors(sys, c, sigma);
}

std::string format_configuration(const System& sys, const Configuration& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < sys.components.size(); ++i) {
    if (i) out += ',';
    out += sys.components[i].locations[c.locations[i]];
  }
  out += " | ";
  bool first = true;
  for (std::size_t i = 0; i < sys.components.size(); ++i) {
    const auto& comp = sys.components[i];
    for (std::size_t v = 0; v < comp.variables.size(); ++v) {
      if (!first) out += ',';
      first = false;
      out += comp.name + "." + comp.variables[v] + "=" +
             (c.values[sys.var_offset(i) + v] ? "1" : "0");
    }
  }
  out += ")";
  return out;
}

std::string format_run(const System& sys, const Run& run) {
  std::string out = "init -> " + format_configuration(sys, run.initial) + "\n";
  for (const auto& [s, c] : run.steps) out += sys.alphabet[s] + " -> " + format_configuration(sys, c) + "\n";
  return out;
}

ExploreResult explore(const System& sys, const ExploreOptions& opts) {
  ExploreResult res;
  std::unordered_map<Configuration, std::size_t, ConfigurationHash> index;
  struct Parent {
    std::size_t from;
    InteractionId via;
  };
  std::vector<Parent> parents;

  auto add = [&](Configuration c, std::size_t from, InteractionId via) {
    auto [it, fresh] = index.try_emplace(c, res.reachable.size());
    if (!fresh) return;
    if (res.reachable.size() >= opts.max_states)
      throw StateLimitExceeded("explicit exploration exceeded " + std::to_string(opts.max_states) +
                               " configurations");
    res.reachable.push_back(std::move(c));
    parents.push_back({from, via});
  };

  add(initial_configuration(sys), 0, 0);
  std::optional<std::size_t> first_bad;
  for (std::size_t i = 0; i < res.reachable.size(); ++i) {
    const Configuration cur = res.reachable[i];
    const bool dead = is_deadlock(sys, cur);
    const bool risky = is_risk(sys, cur);
    if (dead) res.deadlocks.push_back(i);
    if (risky) res.risks.push_back(i);
    if ((dead || risky) && !first_bad) first_bad = i;
    for (InteractionId s : enabled(sys, cur))
      for (auto& next : successors(sys, cur, s)) add(std::move(next), i, s);
  }

  if (first_bad) {
    Run run;
    std::vector<std::size_t> chain;
    for (std::size_t i = *first_bad; i != 0; i = parents[i].from) chain.push_back(i);
    run.initial = res.reachable[0];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      run.steps.emplace_back(parents[*it].via, res.reachable[*it]);
    res.counterexample = std::move(run);
  }
  return res;
}

VerifyResult verify_structure(const System& sys, const CommArchitecture& com, const PrioritySet& extra) {
  VerifyResult r;
  PrioritySet all = sys.priorities;
  all.insert(extra.begin(), extra.end());
  PrioritySet closed;
  try {
    closed = close_priorities(all, sys.num_interactions());
  } catch (const CycleError& e) {
    r.violated_condition = 1;
    std::string walk;
    for (auto s : e.witness()) walk += (walk.empty() ? "" : " < ") + sys.alphabet[s];
    r.message = "condition 1: priorities are not irreflexive after closure (" + walk + ")";
    return r;
  }
  for (const auto& p : closed) {
    for (ComponentId i : sys.participants(p.low)) {
      for (ComponentId j : sys.participants(p.high)) {
        if (com.informs(j, i)) continue;
        r.violated_condition = 3;
        r.message = "condition 3: " + sys.priority_name(p) + " requires " + sys.components[j].name +
                    " -> " + sys.components[i].name;
        return r;
      }
    }
  }
  return r;
}

VerifyResult verify_solution(const System& sys, const CommArchitecture& com, const PrioritySet& extra,
                             const ExploreOptions& opts) {
  VerifyResult r = verify_structure(sys, com, extra);
  if (!r.ok()) return r;
  PrioritySet all = sys.priorities;
  all.insert(extra.begin(), extra.end());
  const System extended = sys.with_priorities(all);
  auto ex = explore(extended, opts);
  if (!ex.safe()) {
    r.violated_condition = 2;
    const auto& last = ex.counterexample->steps.empty() ? ex.counterexample->initial
                                                        : ex.counterexample->steps.back().second;
    r.message = std::string("condition 2: ") + (is_risk(extended, last) ? "risk" : "deadlock") +
                " configuration " + format_configuration(extended, last) + " is reachable";
    r.counterexample = std::move(ex.counterexample);
  }
  return r;
}

const char* verdict_name(SimulationResult::Verdict v) {
  switch (v) {
    case SimulationResult::Verdict::NoViolation: return "no violation";
    case SimulationResult::Verdict::Deadlock: return "deadlock";
    case SimulationResult::Verdict::Risk: return "risk";
  }
  return "?";
}

SimulationResult simulate_distributed(const System& sys, const CommArchitecture& com,
                                      std::uint64_t seed, std::size_t max_steps) {
  SimulationResult res;
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  Configuration cur = initial_configuration(sys);
  res.run.initial = cur;
  if (max_steps == 0) return res;
  if (is_risk(sys, cur)) {
    res.verdict = SimulationResult::Verdict::Risk;
    return res;
  }
  for (std::size_t k = 0; k < max_steps; ++k) {
    const auto en = dist_enabled(sys, com, cur);
    if (en.empty()) {
      res.verdict = SimulationResult::Verdict::Deadlock;
      return res;
    }
    const InteractionId s = en[pick(en.size())];
    auto next = successors(sys, cur, s);
    cur = next[pick(next.size())];
    res.run.steps.emplace_back(s, cur);
    if (is_risk(sys, cur)) {
      res.verdict = SimulationResult::Verdict::Risk;
      return res;
    }
  }
  if (is_deadlock(sys, cur)) res.verdict = SimulationResult::Verdict::Deadlock;
  return res;
}

}  // namespace prisyn
