#include "prisyn/model.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace prisyn {

using ojson = nlohmann::ordered_json;

std::optional<LocationId> Component::find_location(std::string_view loc) const {
  for (std::size_t i = 0; i < locations.size(); ++i)
    if (locations[i] == loc) return i;
  return std::nullopt;
}

std::optional<std::size_t> Component::find_variable(std::string_view var) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i] == var) return i;
  return std::nullopt;
}

void System::finalize() {
  const std::size_t n = alphabet.size();
  participants_.assign(n, {});
  uses_.assign(components.size(), std::vector<bool>(n, false));
  var_offset_.assign(components.size(), 0);
  total_vars_ = 0;
  for (ComponentId c = 0; c < components.size(); ++c) {
    var_offset_[c] = total_vars_;
    total_vars_ += components[c].variables.size();
    for (const auto& t : components[c].transitions) uses_[c][t.label] = true;
  }
  for (InteractionId s = 0; s < n; ++s)
    for (ComponentId c = 0; c < components.size(); ++c)
      if (uses_[c][s]) participants_[s].push_back(c);
}

std::optional<InteractionId> System::find_interaction(std::string_view name) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == name) return i;
  return std::nullopt;
}

std::optional<ComponentId> System::find_component(std::string_view name) const {
  for (std::size_t i = 0; i < components.size(); ++i)
    if (components[i].name == name) return i;
  return std::nullopt;
}

System System::with_priorities(const PrioritySet& p) const {
  System copy = *this;
  copy.priorities = close_priorities(p, alphabet.size());
  return copy;
}

// Warshall saturation; a diagonal entry after closure is a cycle.
PrioritySet close_priorities(const PrioritySet& pairs, std::size_t n) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (const auto& p : pairs) {
    if (p.low >= n || p.high >= n) throw std::out_of_range("priority references unknown interaction");
    r[p.low][p.high] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;

  for (std::size_t s = 0; s < n; ++s) {
    if (!r[s][s]) continue;
    // Shortest walk s -> ... -> s over the input pairs.
    std::vector<std::optional<InteractionId>> parent(n);
    std::vector<bool> seen(n, false);
    std::deque<InteractionId> queue{s};
    std::optional<InteractionId> last;
    while (!queue.empty() && !last) {
      InteractionId u = queue.front();
      queue.pop_front();
      for (const auto& p : pairs) {
        if (p.low != u) continue;
        if (p.high == s) {
          last = u;
          break;
        }
        if (!seen[p.high]) {
          seen[p.high] = true;
          parent[p.high] = u;
          queue.push_back(p.high);
        }
      }
    }
    std::vector<InteractionId> walk{s};
    for (InteractionId v = *last; v != s; v = *parent[v]) walk.push_back(v);
    std::reverse(walk.begin() + 1, walk.end());
    walk.push_back(s);
    throw CycleError("priority cycle", walk);
  }

  PrioritySet out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (r[i][j]) out.insert({i, j});
  return out;
}

std::vector<std::pair<ComponentId, ComponentId>> CommArchitecture::pairs() const {
  std::vector<std::pair<ComponentId, ComponentId>> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (informs(i, j)) out.emplace_back(i, j);
  return out;
}

CommArchitecture CommArchitecture::fully_connected(std::size_t n) {
  CommArchitecture com(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) com.add(i, j);
  return com;
}

CommArchitecture mandatory_architecture(const System& sys) {
  CommArchitecture com(sys.components.size());
  for (ComponentId c = 0; c < sys.components.size(); ++c) com.add(c, c);
  for (InteractionId s = 0; s < sys.num_interactions(); ++s)
    for (ComponentId i : sys.participants(s))
      for (ComponentId j : sys.participants(s)) com.add(i, j);
  for (const auto& p : sys.priorities)
    for (ComponentId i : sys.participants(p.high))
      for (ComponentId j : sys.participants(p.low)) com.add(i, j);
  return com;
}

std::vector<DeployViolation> check_deployable(const System& sys, const CommArchitecture& com) {
  std::vector<DeployViolation> out;
  const auto& comps = sys.components;
  auto arrow = [&](ComponentId a, ComponentId b) { return comps[a].name + " -> " + comps[b].name; };

  for (ComponentId c = 0; c < comps.size(); ++c) {
    if (!com.informs(c, c)) {
      out.push_back({DeployViolation::Kind::SelfTransmission, c, c, 0, std::nullopt,
                     "self-transmission: requires " + arrow(c, c)});
    }
  }
  std::set<std::pair<ComponentId, ComponentId>> reported;
  for (InteractionId s = 0; s < sys.num_interactions(); ++s) {
    for (ComponentId i : sys.participants(s)) {
      for (ComponentId j : sys.participants(s)) {
        if (i == j || com.informs(i, j) || !reported.insert({i, j}).second) continue;
        out.push_back({DeployViolation::Kind::GroupTransmission, i, j, s, std::nullopt,
                       "group transmission: interaction " + sys.alphabet[s] + " requires " + arrow(i, j)});
      }
    }
  }
  for (const auto& p : sys.priorities) {
    for (ComponentId i : sys.participants(p.high)) {
      for (ComponentId j : sys.participants(p.low)) {
        if (com.informs(i, j)) continue;
        out.push_back({DeployViolation::Kind::PriorityTransmission, i, j, p.high, p,
                       "existing-priority transmission: " + sys.priority_name(p) + " requires " +
                           arrow(i, j)});
      }
    }
  }
  return out;
}

VisTable compute_visibility(const System& sys, const CommArchitecture& com) {
  const std::size_t n = sys.num_interactions();
  VisTable vis(n);
  for (InteractionId tau = 0; tau < n; ++tau) {
    for (InteractionId sigma = 0; sigma < n; ++sigma) {
      bool ok = true;
      for (ComponentId i : sys.participants(tau))
        for (ComponentId j : sys.participants(sigma))
          if (!com.informs(i, j)) ok = false;
      vis.set(tau, sigma, ok);
    }
  }
  return vis;
}

// ---------------------------------------------------------------------------
// Model documents

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

const ojson& require(const ojson& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + ": missing field '" + key + "'");
  return *it;
}

std::string as_string(const ojson& v, const std::string& where) {
  if (!v.is_string()) fail(where + ": expected a string");
  return v.get<std::string>();
}

Update parse_update(const ojson& v, const std::string& where) {
  if (v.is_boolean()) return v.get<bool>() ? Update::SetTrue : Update::SetFalse;
  const std::string s = as_string(v, where);
  if (s == "true") return Update::SetTrue;
  if (s == "false") return Update::SetFalse;
  if (s == "any") return Update::Any;
  if (s == "keep") return Update::Keep;
  fail(where + ": update value must be \"true\", \"false\", \"any\" or \"keep\", got \"" + s + "\"");
}

const char* update_text(Update u) {
  switch (u) {
    case Update::SetTrue: return "true";
    case Update::SetFalse: return "false";
    case Update::Any: return "any";
    case Update::Keep: return "keep";
  }
  return "keep";
}

Expr parse_checked(const std::string& text, const std::string& where) {
  try {
    return parse_expr(text);
  } catch (const ParseError& e) {
    fail(where + ": " + e.what());
  }
}

void resolve_risk(const System& sys, Expr& risk) {
  risk.for_each_atom([&](Atom& a) {
    const auto at = a.text.find('@');
    const auto dot = a.text.find('.');
    const auto sep = at != std::string::npos ? at : dot;
    if (sep == std::string::npos)
      fail("risk: atom '" + a.text + "' must have the form Comp@loc or Comp.var");
    const auto comp = sys.find_component(a.text.substr(0, sep));
    if (!comp) fail("risk: unknown component in atom '" + a.text + "'");
    const std::string rest = a.text.substr(sep + 1);
    const Component& c = sys.components[*comp];
    a.component = *comp;
    if (at != std::string::npos) {
      const auto loc = c.find_location(rest);
      if (!loc) fail("risk: unknown location in atom '" + a.text + "'");
      a.kind = AtomKind::Location;
      a.index = *loc;
    } else {
      const auto var = c.find_variable(rest);
      if (!var) fail("risk: unknown variable in atom '" + a.text + "'");
      a.kind = AtomKind::Variable;
      a.index = *var;
    }
  });
}

}  // namespace

Model parse_system(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object()) fail("model document must be an object");

  Model model;
  System& sys = model.system;

  const ojson& comps = require(doc, "components", "model");
  if (!comps.is_array() || comps.empty()) fail("model: 'components' must be a nonempty list");

  // Pass 1: component shells, so labels can be collected in order.
  std::vector<std::string> labels_seen;
  for (const auto& jc : comps) {
    Component c;
    c.name = as_string(require(jc, "name", "component"), "component name");
    const std::string where = "component " + c.name;
    if (sys.find_component(c.name)) fail(where + ": duplicate component name");
    const ojson& locs = require(jc, "locations", where);
    if (!locs.is_array() || locs.empty()) fail(where + ": 'locations' must be a nonempty list");
    for (const auto& l : locs) {
      std::string name = as_string(l, where + " location");
      if (c.find_location(name)) fail(where + ": duplicate location '" + name + "'");
      c.locations.push_back(std::move(name));
    }
    const std::string init = as_string(require(jc, "initial", where), where + " initial");
    const auto init_loc = c.find_location(init);
    if (!init_loc) fail(where + ": unknown initial location '" + init + "'");
    c.initial_location = *init_loc;
    if (auto it = jc.find("variables"); it != jc.end()) {
      if (!it->is_object()) fail(where + ": 'variables' must be an object of name: bool");
      for (auto kv = it->begin(); kv != it->end(); ++kv) {
        if (!kv.value().is_boolean()) fail(where + ": initial value of '" + kv.key() + "' must be a bool");
        c.variables.push_back(kv.key());
        c.initial_values.push_back(kv.value().get<bool>());
      }
    }
    if (auto it = jc.find("transitions"); it != jc.end()) {
      if (!it->is_array()) fail(where + ": 'transitions' must be a list");
      for (const auto& jt : *it) {
        const std::string label = as_string(require(jt, "label", where + " transition"), where + " label");
        if (std::find(labels_seen.begin(), labels_seen.end(), label) == labels_seen.end())
          labels_seen.push_back(label);
      }
    }
    sys.components.push_back(std::move(c));
  }

  if (auto it = doc.find("interactions"); it != doc.end()) {
    if (!it->is_array()) fail("model: 'interactions' must be a list");
    for (const auto& j : *it) {
      std::string name = as_string(j, "interaction");
      if (std::find(sys.alphabet.begin(), sys.alphabet.end(), name) != sys.alphabet.end())
        fail("model: duplicate interaction '" + name + "'");
      if (std::find(labels_seen.begin(), labels_seen.end(), name) == labels_seen.end())
        fail("model: interaction '" + name + "' is not used by any transition");
      sys.alphabet.push_back(std::move(name));
    }
    for (const auto& l : labels_seen)
      if (std::find(sys.alphabet.begin(), sys.alphabet.end(), l) == sys.alphabet.end())
        fail("model: label '" + l + "' missing from 'interactions'");
  } else {
    sys.alphabet = labels_seen;
  }
  if (sys.alphabet.empty()) fail("model: no interactions");

  // Pass 2: transitions.
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    Component& c = sys.components[ci];
    const std::string where = "component " + c.name;
    auto it = comps[ci].find("transitions");
    if (it == comps[ci].end()) continue;
    for (const auto& jt : *it) {
      Transition t;
      const std::string from = as_string(require(jt, "from", where + " transition"), where);
      const std::string to = as_string(require(jt, "to", where + " transition"), where);
      const auto src = c.find_location(from);
      const auto dst = c.find_location(to);
      if (!src) fail(where + ": unknown location '" + from + "'");
      if (!dst) fail(where + ": unknown location '" + to + "'");
      t.source = *src;
      t.target = *dst;
      t.label = *sys.find_interaction(jt["label"].get<std::string>());
      if (auto g = jt.find("guard"); g != jt.end()) {
        t.guard = parse_checked(as_string(*g, where + " guard"), where + " guard");
        t.guard.for_each_atom([&](Atom& a) {
          const auto v = c.find_variable(a.text);
          if (!v) fail(where + ": guard references unknown variable '" + a.text + "'");
          a.kind = AtomKind::Variable;
          a.component = ci;
          a.index = *v;
        });
      }
      t.updates.assign(c.variables.size(), Update::Keep);
      if (auto u = jt.find("update"); u != jt.end()) {
        if (!u->is_object()) fail(where + ": 'update' must be an object");
        for (auto kv = u->begin(); kv != u->end(); ++kv) {
          const auto v = c.find_variable(kv.key());
          if (!v) fail(where + ": update references unknown variable '" + kv.key() + "'");
          t.updates[*v] = parse_update(kv.value(), where + " update of " + kv.key());
        }
      }
      c.transitions.push_back(std::move(t));
    }
  }
  sys.finalize();

  PrioritySet raw;
  if (auto it = doc.find("priorities"); it != doc.end()) {
    if (!it->is_array()) fail("model: 'priorities' must be a list of [low, high]");
    for (const auto& jp : *it) {
      if (!jp.is_array() || jp.size() != 2) fail("model: priority must be [low, high]");
      const std::string lo = as_string(jp[0], "priority");
      const std::string hi = as_string(jp[1], "priority");
      const auto l = sys.find_interaction(lo);
      const auto h = sys.find_interaction(hi);
      if (!l) fail("priority references unknown interaction '" + lo + "'");
      if (!h) fail("priority references unknown interaction '" + hi + "'");
      raw.insert({*l, *h});
    }
  }
  try {
    sys.priorities = close_priorities(raw, sys.num_interactions());
  } catch (const CycleError& e) {
    std::string walk;
    for (auto s : e.witness()) walk += (walk.empty() ? "" : " < ") + sys.alphabet[s];
    throw CycleError("priority cycle: " + walk, e.witness());
  }

  model.architecture = CommArchitecture(sys.components.size());
  if (auto it = doc.find("communication"); it != doc.end()) {
    if (!it->is_array()) fail("model: 'communication' must be a list of [from, to]");
    for (const auto& jp : *it) {
      if (!jp.is_array() || jp.size() != 2) fail("model: communication pair must be [from, to]");
      const std::string a = as_string(jp[0], "communication");
      const std::string b = as_string(jp[1], "communication");
      const auto i = sys.find_component(a);
      const auto j = sys.find_component(b);
      if (!i) fail("communication references unknown component '" + a + "'");
      if (!j) fail("communication references unknown component '" + b + "'");
      model.architecture.add(*i, *j);
    }
  }

  if (auto it = doc.find("risk"); it != doc.end()) {
    sys.risk = parse_checked(as_string(*it, "risk"), "risk");
    resolve_risk(sys, sys.risk);
  }
  return model;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

std::string write_model(const System& sys, const CommArchitecture& com) {
  ojson doc;
  doc["interactions"] = sys.alphabet;
  ojson comps = ojson::array();
  for (const auto& c : sys.components) {
    ojson jc;
    jc["name"] = c.name;
    jc["locations"] = c.locations;
    jc["initial"] = c.locations[c.initial_location];
    ojson vars = ojson::object();
    for (std::size_t v = 0; v < c.variables.size(); ++v) vars[c.variables[v]] = static_cast<bool>(c.initial_values[v]);
    jc["variables"] = vars;
    ojson ts = ojson::array();
    for (const auto& t : c.transitions) {
      ojson jt;
      jt["from"] = c.locations[t.source];
      jt["to"] = c.locations[t.target];
      jt["label"] = sys.alphabet[t.label];
      jt["guard"] = t.guard.to_string();
      ojson upd = ojson::object();
      for (std::size_t v = 0; v < t.updates.size(); ++v)
        if (t.updates[v] != Update::Keep) upd[c.variables[v]] = update_text(t.updates[v]);
      jt["update"] = upd;
      ts.push_back(jt);
    }
    jc["transitions"] = ts;
    comps.push_back(jc);
  }
  doc["components"] = comps;
  ojson prios = ojson::array();
  for (const auto& p : sys.priorities) prios.push_back({sys.alphabet[p.low], sys.alphabet[p.high]});
  doc["priorities"] = prios;
  ojson pairs = ojson::array();
  for (auto [i, j] : com.pairs()) pairs.push_back({sys.components[i].name, sys.components[j].name});
  doc["communication"] = pairs;
  doc["risk"] = sys.risk.to_string();
  return doc.dump(2) + "\n";
}

PrioritySet parse_priority_list(const System& sys, std::string_view text) {
  PrioritySet out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto lt = line.find('<');
    if (lt == std::string::npos) fail("priorities line " + std::to_string(lineno) + ": expected 'low < high'");
    const std::string lo = trim(line.substr(0, lt));
    const std::string hi = trim(line.substr(lt + 1));
    const auto l = sys.find_interaction(lo);
    const auto h = sys.find_interaction(hi);
    if (!l || !h)
      fail("priorities line " + std::to_string(lineno) + ": unknown interaction in '" + line + "'");
    out.insert({*l, *h});
  }
  return out;
}

std::string format_priorities(const System& sys, const PrioritySet& p) {
  std::string out;
  for (const auto& q : p) out += sys.priority_name(q) + "\n";
  return out;
}

}  // namespace prisyn
