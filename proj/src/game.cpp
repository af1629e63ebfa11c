#include "prisyn/game.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace prisyn {

namespace {

std::size_t width(std::size_t n) {
  std::size_t w = 0;
  while ((std::size_t{1} << w) < n) ++w;
  return w;
}

std::vector<BoolVar> twins(const std::vector<BoolVar>& vars) {
  std::vector<BoolVar> out;
  out.reserve(vars.size());
  for (auto v : vars) out.push_back(v.twin());
  return out;
}

BoolVar pick(BoolVar v, bool primed) { return primed ? v.twin() : v; }

StateSet location_is(const GameEncoding& enc, ComponentId c, std::size_t loc, bool primed) {
  return enc.dict.encode(primed ? twins(enc.locations[c]) : enc.locations[c], loc);
}

StateSet frame(const GameEncoding& enc, ComponentId c) {
  StateSet r = enc.dict.constant(true);
  for (auto v : enc.locations[c]) r &= enc.dict.atom(v).iff(enc.dict.atom(v.twin()));
  for (auto v : enc.data[c]) r &= enc.dict.atom(v).iff(enc.dict.atom(v.twin()));
  return r;
}

StateSet guard_predicate(const GameEncoding& enc, const Expr& guard) {
  return guard.fold<StateSet>(
      [&](const Expr& e) {
        if (e.op() == Expr::Op::Const) return enc.dict.constant(e.value());
        const Atom& a = e.atom_ref();
        switch (a.kind) {
          case AtomKind::Variable: return enc.dict.atom(enc.data[a.component][a.index]);
          case AtomKind::Location: return location_is(enc, a.component, a.index, false);
          case AtomKind::Unresolved: break;
        }
        throw std::invalid_argument("unresolved atom '" + a.text + "'");
      },
      [](StateSet x) { return !x; }, [](StateSet x, StateSet y) { return x & y; },
      [](StateSet x, StateSet y) { return x | y; });
}

StateSet update_predicate(const GameEncoding& enc, BoolVar v, Update u) {
  switch (u) {
    case Update::Keep: return enc.dict.atom(v).iff(enc.dict.atom(v.twin()));
    case Update::SetTrue: return enc.dict.atom(v.twin());
    case Update::SetFalse: return !enc.dict.atom(v.twin());
    case Update::Any: return enc.dict.constant(true);
  }
  throw std::logic_error("unknown update");
}

/// Closed pairs ordered so that every pair with high = σ precedes every
/// pair with low = σ: the σ bit is read before it is cleared.
std::vector<Priority> fold_order(const PrioritySet& closed) {
  std::map<InteractionId, std::size_t> below;
  for (const auto& p : closed) ++below[p.high];
  std::vector<Priority> out(closed.begin(), closed.end());
  std::stable_sort(out.begin(), out.end(),
                   [&](const Priority& x, const Priority& y) { return below[x.low] < below[y.low]; });
  return out;
}

}  // namespace

StateSet GameEncoding::chosen_is(InteractionId s, bool primed_vars) const {
  return dict.encode(primed_vars ? twins(chosen) : chosen, s);
}

StateSet GameEncoding::bits_clear(bool primed_vars) const {
  StateSet r = chosen_is(0, primed_vars);
  for (auto b : bits) r &= !dict.atom(pick(b, primed_vars));
  return r;
}

StateSet GameEncoding::configuration(const Configuration& c, bool primed_vars) const {
  StateSet r = dict.constant(true);
  for (ComponentId i = 0; i < locations.size(); ++i) {
    r &= location_is(*this, i, c.locations.at(i), primed_vars);
    for (std::size_t v = 0; v < data[i].size(); ++v)
      r &= dict.literal(pick(data[i][v], primed_vars), c.values.at(system.var_offset(i) + v) != 0);
  }
  return r;
}

GameEncoding encode(const System& sys, const VisTable& vis, const EncodeOptions& opts) {
  const std::size_t n = sys.num_interactions();
  const std::size_t m = sys.components.size();
  if (n == 0) throw std::invalid_argument("cannot encode a system without interactions");
  if (vis.size() != n) throw std::invalid_argument("visibility table does not match the alphabet");

  std::vector<ComponentId> order = opts.component_order;
  if (order.empty()) {
    for (ComponentId c = 0; c < m; ++c) order.push_back(c);
  } else {
    std::vector<ComponentId> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (ComponentId c = 0; c < m; ++c)
      if (sorted.size() != m || sorted[c] != c)
        throw std::invalid_argument("component order is not a permutation of the components");
  }
  std::vector<std::size_t> rank(m);
  for (std::size_t i = 0; i < m; ++i) rank[order[i]] = i;

  GameEncoding enc;
  enc.system = sys;
  enc.vis = vis;
  VarDictionary& d = enc.dict;

  enc.turn = d.add("p0", VarRole::Turn);
  const std::size_t a_width = width(n);
  enc.chosen.resize(a_width);
  for (std::size_t i = a_width; i-- > 0;) enc.chosen[i] = d.add("A" + std::to_string(i), VarRole::Chosen, 0, i);

  // Interaction bits sit after the last participant in the component order.
  std::vector<std::vector<InteractionId>> bits_after(m);
  for (InteractionId s = 0; s < n; ++s) {
    const auto& parts = sys.participants(s);
    ComponentId last = *std::max_element(parts.begin(), parts.end(),
                                         [&](ComponentId x, ComponentId y) { return rank[x] < rank[y]; });
    bits_after[last].push_back(s);
  }
  enc.bits.resize(n);
  enc.locations.resize(m);
  enc.data.resize(m);
  for (ComponentId c : order) {
    const Component& comp = sys.components[c];
    const std::size_t w = width(comp.locations.size());
    enc.locations[c].resize(w);
    for (std::size_t i = w; i-- > 0;)
      enc.locations[c][i] = d.add(comp.name + ".loc" + std::to_string(i), VarRole::Location, c, i);
    for (std::size_t v = 0; v < comp.variables.size(); ++v)
      enc.data[c].push_back(d.add(comp.name + "." + comp.variables[v], VarRole::Data, c, v));
    for (InteractionId s : bits_after[c]) enc.bits[s] = d.add(sys.alphabet[s], VarRole::Interaction, s, 0);
  }
  enc.unprimed = d.unprimed();
  enc.primed = d.primed();

  const StateSet p0 = d.atom(enc.turn);
  const StateSet p0n = d.atom(enc.turn.twin());

  enc.valid = d.constant(true);
  for (ComponentId c = 0; c < m; ++c) {
    StateSet ok = d.constant(false);
    for (std::size_t l = 0; l < sys.components[c].locations.size(); ++l) ok |= location_is(enc, c, l, false);
    enc.valid &= ok;
  }

  // Per (component, interaction): some σ-transition of the component, and
  // readiness (its source and guard).
  std::vector<std::vector<StateSet>> moves(m, std::vector<StateSet>(n, d.constant(false)));
  std::vector<std::vector<StateSet>> ready(m, std::vector<StateSet>(n, d.constant(false)));
  for (ComponentId c = 0; c < m; ++c) {
    for (const auto& t : sys.components[c].transitions) {
      const StateSet pre = location_is(enc, c, t.source, false) & guard_predicate(enc, t.guard);
      StateSet mv = pre & location_is(enc, c, t.target, true);
      for (std::size_t v = 0; v < t.updates.size(); ++v) mv &= update_predicate(enc, enc.data[c][v], t.updates[v]);
      ready[c][t.label] |= pre;
      moves[c][t.label] |= mv;
    }
  }

  enc.p_enabled.assign(n, d.constant(true));
  for (InteractionId s = 0; s < n; ++s)
    for (ComponentId c : sys.participants(s)) enc.p_enabled[s] &= ready[c][s];

  enc.c_dead = enc.valid;
  for (InteractionId s = 0; s < n; ++s) enc.c_dead &= !enc.p_enabled[s];

  std::vector<StateSet> frames;
  StateSet frame_all = d.constant(true);
  for (ComponentId c = 0; c < m; ++c) {
    frames.push_back(frame(enc, c));
    frame_all &= frames.back();
  }

  StateSet ctrl_choice = d.constant(false);
  for (InteractionId s = 0; s < n; ++s) {
    StateSet t = enc.p_enabled[s] & enc.chosen_is(s, true) & d.atom(enc.bits[s].twin());
    for (InteractionId tau = 0; tau < n; ++tau) {
      if (tau == s) continue;
      const StateSet bit = d.atom(enc.bits[tau].twin());
      t &= vis(tau, s) ? enc.p_enabled[tau].iff(bit) : !bit;
    }
    ctrl_choice |= t;
  }
  enc.t_ctrl = p0 & !p0n & enc.bits_clear(false) & frame_all & ctrl_choice;

  StateSet env_choice = d.constant(false);
  for (InteractionId s = 0; s < n; ++s) {
    StateSet t = enc.chosen_is(s, false);
    for (ComponentId c = 0; c < m; ++c) t &= sys.participates(c, s) ? moves[c][s] : frames[c];
    env_choice |= t;
  }
  enc.t_env = (!p0) & p0n & enc.bits_clear(true) & env_choice;

  enc.init = p0 & enc.bits_clear(false) & enc.configuration(initial_configuration(sys), false);

  for (const auto& p : fold_order(sys.priorities)) enc = apply_priority(std::move(enc), p);
  return enc;
}

GameEncoding apply_priority(GameEncoding enc, Priority p) {
  if (p.low == p.high) throw std::invalid_argument("priority must relate two distinct interactions");
  if (p.low >= enc.bits.size() || p.high >= enc.bits.size()) throw std::out_of_range("priority out of range");
  const BoolVar low = enc.bits[p.low].twin();
  const StateSet lo = enc.dict.atom(low);
  const StateSet hi = enc.dict.atom(enc.bits[p.high].twin());
  enc.t_ctrl = enc.t_ctrl.minus(lo & hi & enc.chosen_is(p.low, true));
  const StateSet both = enc.t_ctrl & lo & hi;
  if (!both.is_false())
    enc.t_ctrl = enc.t_ctrl.minus(both) | (both.exists(enc.dict.make_set({low})) & !lo);
  enc.applied.insert(p);
  return enc;
}

StateSet post_image(const GameEncoding& enc, const StateSet& from) {
  const StateSet next = from.and_exists(enc.t_ctrl, enc.unprimed) | from.and_exists(enc.t_env, enc.unprimed);
  return next.swap_primed();
}

StateSet reachable_states(const GameEncoding& enc) { return reachable_states(enc, enc.dict.constant(false)); }

StateSet reachable_states(const GameEncoding& enc, const StateSet& stop) {
  StateSet reach = enc.init;
  StateSet frontier = enc.init;
  while (!frontier.is_false()) {
    const StateSet next = post_image(enc, frontier.minus(stop)).minus(reach);
    reach |= next;
    frontier = next;
  }
  return reach;
}

StateSet risk_predicate(const GameEncoding& enc) {
  return guard_predicate(enc, enc.system.risk) & enc.control();
}

StateSet bad_states(const GameEncoding& enc) { return (risk_predicate(enc) | enc.c_dead) & enc.control(); }

GameEncoding restrict_to(GameEncoding enc, const StateSet& reach) {
  enc.t_ctrl &= reach;
  enc.t_env &= reach;
  return enc;
}

namespace {

std::size_t read_bits(const std::vector<BoolVar>& vars, const std::function<bool(BoolVar)>& value) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (value(vars[i])) r |= std::size_t{1} << i;
  return r;
}

GameState read_state(const GameEncoding& enc, const std::function<bool(BoolVar)>& value) {
  GameState s;
  s.control = value(enc.turn);
  s.chosen = read_bits(enc.chosen, value);
  for (auto b : enc.bits) s.bits.push_back(value(b));
  for (ComponentId c = 0; c < enc.locations.size(); ++c) {
    s.config.locations.push_back(static_cast<std::uint32_t>(read_bits(enc.locations[c], value)));
    for (auto v : enc.data[c]) s.config.values.push_back(value(v) ? 1 : 0);
  }
  return s;
}

}  // namespace

StateSet state_predicate(const GameEncoding& enc, const GameState& s, bool primed_vars) {
  StateSet r = enc.dict.literal(pick(enc.turn, primed_vars), s.control) &
               enc.chosen_is(s.chosen, primed_vars) & enc.configuration(s.config, primed_vars);
  for (std::size_t i = 0; i < enc.bits.size(); ++i) r &= enc.dict.literal(pick(enc.bits[i], primed_vars), s.bits.at(i));
  return r;
}

std::vector<GameState> decode_states(const GameEncoding& enc, const StateSet& s) {
  std::vector<GameState> out;
  s.enumerate(enc.unprimed, [&](const std::vector<bool>& a) {
    out.push_back(read_state(enc, [&](BoolVar v) { return a[v.level / 2]; }));
  });
  return out;
}

std::vector<GameMove> decode_moves(const GameEncoding& enc, const StateSet& rel) {
  std::vector<BoolVar> all;
  for (std::uint32_t l = 0; l < 2 * enc.dict.size(); ++l) all.push_back({l});
  std::vector<GameMove> out;
  rel.enumerate(enc.dict.make_set(all), [&](const std::vector<bool>& a) {
    GameMove m;
    m.from = read_state(enc, [&](BoolVar v) { return a[v.level]; });
    m.to = read_state(enc, [&](BoolVar v) { return a[v.level + 1]; });
    out.push_back(std::move(m));
  });
  return out;
}

std::string format_state(const GameEncoding& enc, const GameState& s) {
  const System& sys = enc.system;
  std::string out;
  if (s.control) {
    out = "ctrl ";
  } else {
    out = "env " + (s.chosen < sys.num_interactions() ? sys.alphabet[s.chosen] : "?" + std::to_string(s.chosen)) +
          " {";
    bool first = true;
    for (std::size_t i = 0; i < s.bits.size(); ++i) {
      if (!s.bits[i]) continue;
      out += (first ? "" : ",") + sys.alphabet[i];
      first = false;
    }
    out += "} ";
  }
  for (std::size_t c = 0; c < sys.components.size(); ++c)
    if (s.config.locations[c] >= sys.components[c].locations.size()) return out + "(invalid)";
  return out + format_configuration(sys, s.config);
}

std::string export_dot(const GameEncoding& enc, const StateSet& reach) {
  const auto states = decode_states(enc, reach);
  std::map<GameState, std::size_t> id;
  std::ostringstream os;
  os << "digraph game {\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    id[states[i]] = i;
    os << "  s" << i << " [label=\"" << format_state(enc, states[i]) << "\", shape="
       << (states[i].control ? "box" : "ellipse") << "];\n";
  }
  for (const auto& [rel, tag] : {std::pair{enc.t_ctrl & reach, "ctrl"}, std::pair{enc.t_env & reach, "env"}}) {
    for (const auto& m : decode_moves(enc, rel)) {
      auto from = id.find(m.from);
      auto to = id.find(m.to);
      if (from == id.end() || to == id.end()) continue;
      os << "  s" << from->second << " -> s" << to->second << " [label=\"" << tag << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace prisyn
