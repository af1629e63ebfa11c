#include "prisyn/fixer.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>
#include <stdexcept>

namespace prisyn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string pair_list(const System& sys, const PrioritySet& p) {
  std::string out = "{";
  for (const auto& x : p) out += (out.size() > 1 ? ", " : "") + sys.priority_name(x);
  return out + "}";
}

bool supported(const VisTable& vis, const Priority& p) { return vis(p.high, p.low); }

/// Closure of `p` if acyclic and every closed pair is supported.
bool admissible(const PrioritySet& p, const VisTable& vis) {
  try {
    const PrioritySet closed = close_priorities(p, vis.size());
    return std::all_of(closed.begin(), closed.end(), [&](const Priority& x) { return supported(vis, x); });
  } catch (const CycleError&) {
    return false;
  }
}

}  // namespace

std::vector<FixCandidate> extract_candidates(const StateSet& boundary, const GameEncoding& enc) {
  std::vector<BoolVar> keep;
  for (auto v : enc.chosen) keep.push_back(v.twin());
  for (auto v : enc.bits) keep.push_back(v.twin());
  std::vector<BoolVar> drop;
  for (std::uint32_t l = 0; l < 2 * enc.dict.size(); ++l)
    if (std::find(keep.begin(), keep.end(), BoolVar{l}) == keep.end()) drop.push_back({l});
  const StateSet proj = boundary.exists(enc.dict.make_set(drop));
  const VarSet kept = enc.dict.make_set(keep);

  std::set<FixCandidate> found;
  proj.enumerate(kept, [&](const std::vector<bool>& a) {
    auto value = [&](BoolVar v) {
      const auto& lv = kept.levels();
      return a[std::lower_bound(lv.begin(), lv.end(), v.level) - lv.begin()];
    };
    FixCandidate c;
    for (std::size_t i = 0; i < enc.chosen.size(); ++i)
      if (value(enc.chosen[i].twin())) c.chosen |= std::size_t{1} << i;
    for (InteractionId s = 0; s < enc.bits.size(); ++s)
      if (s != c.chosen && value(enc.bits[s].twin())) c.escapes.push_back(s);
    if (c.escapes.empty()) throw std::logic_error("boundary move without a visible escape");
    found.insert(std::move(c));
  });
  return {found.begin(), found.end()};
}

Priority PriorityCnf::pair_of(int v) const {
  for (const auto& [p, idx] : var)
    if (idx == v) return p;
  throw std::out_of_range("not a priority variable");
}

PriorityCnf build_constraints(const std::vector<FixCandidate>& cands, const PrioritySet& existing,
                              const VisTable& vis, const std::vector<PrioritySet>& blocked) {
  PriorityCnf out;
  out.candidates = cands;
  std::set<InteractionId> used;
  for (const auto& c : cands) {
    used.insert(c.chosen);
    used.insert(c.escapes.begin(), c.escapes.end());
  }
  for (const auto& p : existing) {
    used.insert(p.low);
    used.insert(p.high);
  }
  out.universe.assign(used.begin(), used.end());
  for (auto a : out.universe)
    for (auto b : out.universe) out.var[{a, b}] = out.cnf.new_var();
  auto x = [&](InteractionId lo, InteractionId hi) { return out.var.at({lo, hi}); };
  Cnf& cnf = out.cnf;

  for (std::size_t k = 0; k < cands.size(); ++k) {
    const int s = cnf.new_var();
    std::vector<Lit> clause{-s};
    for (auto e : cands[k].escapes) clause.push_back(x(cands[k].chosen, e));
    cnf.add_clause(std::move(clause));
    cnf.assumptions.push_back(s);
    out.selector[s] = k;
  }
  for (const auto& p : existing) {
    cnf.assumptions.push_back(x(p.low, p.high));
    out.asserted[x(p.low, p.high)] = p;
  }
  for (auto a : out.universe) cnf.add_clause({-x(a, a)});
  for (auto a : out.universe)
    for (auto b : out.universe) {
      if (a == b) continue;
      for (auto c : out.universe)
        if (b != c) cnf.add_clause({-x(a, b), -x(b, c), x(a, c)});
    }
  for (auto a : out.universe)
    for (auto b : out.universe)
      if (a != b && !vis(b, a)) cnf.add_clause({-x(a, b)});
  for (auto a : out.universe)
    for (auto b : out.universe) {
      if (a == b || vis(b, a)) continue;
      for (auto c : out.universe)
        if (c != a && c != b && vis(c, a) && vis(b, c)) cnf.add_clause({-x(a, c), -x(c, b)});
    }
  for (const auto& set : blocked) {
    std::vector<Lit> clause;
    bool representable = !set.empty();
    for (const auto& p : set) {
      auto it = out.var.find(p);
      if (it == out.var.end()) representable = false;
      else clause.push_back(-it->second);
    }
    if (representable) cnf.add_clause(std::move(clause));
  }
  return out;
}

Resolution resolve(const PriorityCnf& pcnf, const PrioritySet& existing) {
  Resolution r;
  const SatResult s = solve(pcnf.cnf);
  r.sat = s.sat;
  if (s.sat) {
    for (const auto& [p, v] : pcnf.var)
      if (p.low != p.high && s.value(v) && !existing.count(p)) r.fix.insert(p);
    return r;
  }
  for (Lit a : s.core) {
    if (auto it = pcnf.selector.find(a); it != pcnf.selector.end()) {
      r.core_candidates.push_back(it->second);
      const auto& c = pcnf.candidates[it->second];
      for (auto e : c.escapes) r.core.insert({c.chosen, e});
    } else if (auto jt = pcnf.asserted.find(a); jt != pcnf.asserted.end()) {
      r.core.insert(jt->second);
    }
  }
  std::sort(r.core_candidates.begin(), r.core_candidates.end());
  return r;
}

PrioritySet core_guided_refine(const PrioritySet& core, Strategy strategy, const VisTable& vis,
                               const PrioritySet& current, const std::vector<PrioritySet>& blocked) {
  if (core.empty()) throw std::invalid_argument("core_guided_refine needs a nonempty core");
  auto usable = [&](const Priority& p) {
    if (p.low == p.high || current.count(p) || !supported(vis, p)) return false;
    return std::find(blocked.begin(), blocked.end(), PrioritySet{p}) == blocked.end();
  };
  PrioritySet chosen;
  for (const auto& p : core) {  // PrioritySet iterates in declaration order of (low, high)
    if (!usable(p)) continue;
    PrioritySet trial = current;
    trial.insert(chosen.begin(), chosen.end());
    trial.insert(p);
    if (!admissible(trial, vis)) continue;
    chosen.insert(p);
    if (strategy == Strategy::RP1) break;
  }
  return chosen;
}

const char* verdict_name(SynthesisResult::Verdict v) {
  switch (v) {
    case SynthesisResult::Verdict::Solved: return "solved";
    case SynthesisResult::Verdict::Infeasible: return "infeasible";
    case SynthesisResult::Verdict::GaveUp: return "gave-up";
    case SynthesisResult::Verdict::Error: return "error";
  }
  return "?";
}

VerifyResult check_solution(const System& sys, const CommArchitecture& com, const PrioritySet& extra,
                            std::size_t explicit_limit, std::string* method) {
  try {
    ExploreOptions eo;
    eo.max_states = explicit_limit;
    VerifyResult r = verify_solution(sys, com, extra, eo);
    if (method) *method = "explicit";
    return r;
  } catch (const StateLimitExceeded&) {
  }
  if (method) *method = "symbolic";
  VerifyResult r = verify_structure(sys, com, extra);
  if (!r.ok()) return r;
  PrioritySet all = sys.priorities;
  all.insert(extra.begin(), extra.end());
  const System extended = sys.with_priorities(all);
  const Diagnosis d = diagnose(encode(extended, compute_visibility(sys, com)));
  if (!d.safe()) {
    r.violated_condition = 2;
    r.message = "condition 2: a deadlock or risk configuration is reachable";
  }
  return r;
}

SynthesisResult synthesize(const System& sys, const CommArchitecture& com, const SynthesisOptions& opts) {
  const auto violations = check_deployable(sys, com);
  if (!violations.empty()) throw std::invalid_argument("architecture is not deployable: " + violations.front().message);

  const auto t_start = Clock::now();
  SynthesisResult res;
  res.stats.components = sys.components.size();
  res.stats.interactions = sys.num_interactions();
  const VisTable vis = compute_visibility(sys, com);

  auto analyse = [&](const PrioritySet& p, bool over) {
    auto t0 = Clock::now();
    const GameEncoding enc = encode(sys.with_priorities(p), vis, opts.encode);
    res.stats.encode_seconds += seconds_since(t0);
    t0 = Clock::now();
    Diagnosis d = diagnose(enc, over);
    res.stats.attractor_seconds += seconds_since(t0);
    return d;
  };

  auto finish = [&](SynthesisResult::Verdict v, std::string reason) {
    res.verdict = v;
    res.reason = std::move(reason);
    res.stats.total_seconds = seconds_since(t_start);
    return res;
  };

  auto solved = [&](const PrioritySet& p) {
    PrioritySet closed = close_priorities(p, sys.num_interactions());
    PrioritySet fix;
    for (const auto& x : closed)
      if (!sys.priorities.count(x)) fix.insert(x);
    const auto t0 = Clock::now();
    const VerifyResult v = check_solution(sys, com, fix, opts.explicit_verify_limit, &res.verification);
    res.stats.verify_seconds += seconds_since(t0);
    if (!v.ok())
      return finish(SynthesisResult::Verdict::Error,
                    "internal error: synthesized priorities fail condition " +
                        std::to_string(v.violated_condition) + ": " + v.message);
    res.priorities = std::move(fix);
    return finish(SynthesisResult::Verdict::Solved, "");
  };

  const Diagnosis base = analyse(sys.priorities, false);
  if (base.safe()) {
    res.trace.push_back("initial system is safe");
    return solved(sys.priorities);
  }
  if (base.init_lost()) {
    res.trace.push_back("initial state lies in the nested risk attractor");
    return finish(SynthesisResult::Verdict::Infeasible, "initial state in nested-risk-attractor");
  }

  // Asserted priorities, one frame per decision; blocked sets must not be
  // asserted or selected again.
  std::vector<PrioritySet> frames;
  std::vector<PrioritySet> blocked;
  auto current = [&] {
    PrioritySet p = sys.priorities;
    for (const auto& f : frames) p.insert(f.begin(), f.end());
    return p;
  };
  auto retract = [&](const std::string& why) {
    blocked.push_back(frames.back());
    res.trace.push_back("  retract " + pair_list(sys, frames.back()) + ": " + why);
    frames.pop_back();
  };

  for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
    res.stats.iterations = iter;
    PrioritySet now;
    try {
      now = close_priorities(current(), sys.num_interactions());
    } catch (const CycleError&) {
      retract("asserted priorities are cyclic");
      continue;
    }
    const Diagnosis exact = analyse(now, false);
    if (exact.safe()) {
      res.trace.push_back("iteration " + std::to_string(iter) + ": asserted priorities are sufficient");
      return solved(now);
    }
    if (exact.init_lost()) {
      if (frames.empty())
        return finish(SynthesisResult::Verdict::Infeasible, "initial state in nested-risk-attractor");
      retract("initial state in nested-risk-attractor");
      continue;
    }
    const AttractorResult* attr = &exact.attractor;
    Diagnosis over;
    if (opts.over_approx) {
      over = analyse(now, true);
      if (!over.init_lost()) attr = &over.attractor;
    }
    const auto cands = extract_candidates(attr->boundary, exact.game);

    auto t0 = Clock::now();
    const PriorityCnf pcnf = build_constraints(cands, now, vis, blocked);
    const Resolution r = resolve(pcnf, now);
    res.stats.sat_seconds += seconds_since(t0);

    std::string line = "iteration " + std::to_string(iter) + ": " + std::to_string(cands.size()) + " candidates, ";
    if (r.sat) {
      res.trace.push_back(line + "sat, fix " + pair_list(sys, r.fix));
      PrioritySet next = now;
      next.insert(r.fix.begin(), r.fix.end());
      const Diagnosis check = analyse(next, false);
      if (check.safe()) return solved(next);
      if (r.fix.empty()) {
        // Nothing new to add, yet unsafe: the remaining risk is not blockable here.
        if (frames.empty()) return finish(SynthesisResult::Verdict::GaveUp, "no candidate fix removes the risk");
        retract("empty fix");
        continue;
      }
      frames.push_back(r.fix);
      if (check.init_lost()) retract("fix puts the initial state in the nested-risk-attractor");
      continue;
    }

    res.last_core = r.core;
    res.trace.push_back(line + "unsat, core " + pair_list(sys, r.core));
    PrioritySet refine;
    if (!r.core.empty()) refine = core_guided_refine(r.core, opts.strategy, vis, now, blocked);
    if (refine.empty()) {
      if (frames.empty()) return finish(SynthesisResult::Verdict::GaveUp, "conflict cannot be refined further");
      retract("no refinement left");
      continue;
    }
    res.trace.push_back("  assert " + pair_list(sys, refine));
    frames.push_back(refine);
  }
  return finish(SynthesisResult::Verdict::GaveUp,
                "iteration budget of " + std::to_string(opts.max_iter) + " exhausted");
}

}  // namespace prisyn
