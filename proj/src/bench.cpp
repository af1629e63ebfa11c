#include "prisyn/bench.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace prisyn {

using ojson = nlohmann::ordered_json;

namespace {

ojson transition(const std::string& from, const std::string& label, const std::string& to) {
  return {{"from", from}, {"to", to}, {"label", label}};
}

/// Parse the document and add the mandatory pairs to its architecture.
Model finish(const ojson& doc) {
  Model m = parse_system(doc.dump());
  for (auto [i, j] : mandatory_architecture(m.system).pairs()) m.architecture.add(i, j);
  return m;
}

}  // namespace

Model gen_fig1() {
  ojson doc;
  doc["components"] = ojson::array({
      {{"name", "C1"},
       {"locations", {"idle", "used"}},
       {"initial", "idle"},
       {"transitions", {transition("idle", "a", "used"), transition("used", "b", "idle")}}},
      {{"name", "C2"},
       {"locations", {"idle", "used"}},
       {"initial", "idle"},
       {"transitions", {transition("idle", "c", "used"), transition("used", "d", "idle")}}},
  });
  doc["interactions"] = {"a", "b", "c", "d"};
  doc["communication"] = ojson::array({{"C1", "C1"}, {"C2", "C2"}, {"C2", "C1"}});
  doc["risk"] = "C1@used & C2@used";
  return parse_system(doc.dump());
}

Direction parse_direction(const std::string& text) {
  if (text == "cw" || text == "clockwise") return Direction::Clockwise;
  if (text == "ccw" || text == "counter-clockwise") return Direction::CounterClockwise;
  if (text == "none") return Direction::None;
  throw std::invalid_argument("unknown direction '" + text + "' (expected cw, ccw or none)");
}

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::Clockwise: return "cw";
    case Direction::CounterClockwise: return "ccw";
    case Direction::None: return "none";
  }
  return "?";
}

Model gen_philosophers(const PhilosopherParams& p) {
  if (p.n < 2) throw std::invalid_argument("dining philosophers need n >= 2");
  const std::size_t n = p.n;
  auto idx = [](const char* base, std::size_t i) { return std::string(base) + std::to_string(i); };

  ojson comps = ojson::array();
  ojson names = ojson::array();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n;
    comps.push_back({{"name", idx("Fork", i)},
                     {"locations", {"free", "held"}},
                     {"initial", "free"},
                     {"transitions",
                      {transition("free", idx("take_left", i), "held"),
                       transition("free", idx("take_right", prev), "held"),
                       transition("held", idx("release", i), "free"),
                       transition("held", idx("release", prev), "free")}}});
    comps.push_back({{"name", idx("Phil", i)},
                     {"locations", {"think", "hasLeft", "eat"}},
                     {"initial", "think"},
                     {"transitions",
                      {transition("think", idx("take_left", i), "hasLeft"),
                       transition("hasLeft", idx("take_right", i), "eat"),
                       transition("eat", idx("release", i), "think")}}});
    names.push_back(idx("take_left", i));
    names.push_back(idx("take_right", i));
    names.push_back(idx("release", i));
  }
  ojson doc;
  doc["components"] = std::move(comps);
  doc["interactions"] = std::move(names);
  ojson links = ojson::array();
  for (std::size_t i = 0; i < n; ++i) {
    if (p.direction == Direction::CounterClockwise) links.push_back({idx("Phil", i), idx("Phil", (i + 1) % n)});
    if (p.direction == Direction::Clockwise) links.push_back({idx("Phil", i), idx("Phil", (i + n - 1) % n)});
  }
  doc["communication"] = std::move(links);
  doc["risk"] = "false";
  return finish(doc);
}

Model gen_random(std::uint64_t seed, const RandomSizes& sizes) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  const std::size_t m = uniform(1, std::max<std::size_t>(1, sizes.max_components));
  const std::size_t k = uniform(1, std::max<std::size_t>(1, sizes.max_interactions));
  std::vector<std::size_t> locs(m), vars(m);
  for (std::size_t c = 0; c < m; ++c) {
    locs[c] = uniform(1, std::max<std::size_t>(1, sizes.max_locations));
    vars[c] = uniform(0, sizes.max_variables);
  }
  auto loc_name = [](std::size_t l) { return "l" + std::to_string(l); };
  auto var_name = [](std::size_t v) { return "v" + std::to_string(v); };

  std::vector<ojson> transitions(m, ojson::array());
  std::vector<std::string> alphabet;
  for (std::size_t s = 0; s < k; ++s) {
    const std::string label = "i" + std::to_string(s);
    alphabet.push_back(label);
    std::vector<std::size_t> parts;
    for (std::size_t c = 0; c < m; ++c)
      if (coin(0.4)) parts.push_back(c);
    if (parts.empty()) parts.push_back(uniform(0, m - 1));
    for (std::size_t c : parts) {
      const std::size_t count = uniform(1, 2);
      for (std::size_t t = 0; t < count; ++t) {
        ojson jt = transition(loc_name(uniform(0, locs[c] - 1)), label, loc_name(uniform(0, locs[c] - 1)));
        if (vars[c] > 0) {
          const std::size_t v = uniform(0, vars[c] - 1);
          switch (uniform(0, 2)) {
            case 1: jt["guard"] = var_name(v); break;
            case 2: jt["guard"] = "!" + var_name(v); break;
            default: break;
          }
          static const char* kUpdates[] = {"keep", "true", "false", "any"};
          const char* u = kUpdates[uniform(0, 3)];
          if (std::string(u) != "keep") jt["update"] = {{var_name(v), u}};
        }
        transitions[c].push_back(std::move(jt));
      }
    }
  }

  // Give every location of a busy component a way out, so that deadlock
  // is not the common case.
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<std::string> own;
    std::vector<bool> has_exit(locs[c], false);
    for (const auto& jt : transitions[c]) {
      const std::string label = jt["label"].get<std::string>();
      if (std::find(own.begin(), own.end(), label) == own.end()) own.push_back(label);
      has_exit[std::stoul(jt["from"].get<std::string>().substr(1))] = true;
    }
    if (own.empty()) continue;
    for (std::size_t l = 0; l < locs[c]; ++l)
      if (!has_exit[l])
        transitions[c].push_back(transition(loc_name(l), own[uniform(0, own.size() - 1)],
                                            loc_name(uniform(0, locs[c] - 1))));
  }

  ojson comps = ojson::array();
  for (std::size_t c = 0; c < m; ++c) {
    ojson jc;
    jc["name"] = "C" + std::to_string(c);
    ojson ls = ojson::array();
    for (std::size_t l = 0; l < locs[c]; ++l) ls.push_back(loc_name(l));
    jc["locations"] = std::move(ls);
    jc["initial"] = loc_name(uniform(0, locs[c] - 1));
    ojson vs = ojson::object();
    for (std::size_t v = 0; v < vars[c]; ++v) vs[var_name(v)] = coin(0.5);
    jc["variables"] = std::move(vs);
    jc["transitions"] = std::move(transitions[c]);
    comps.push_back(std::move(jc));
  }

  ojson doc;
  doc["components"] = std::move(comps);
  doc["interactions"] = alphabet;
  if (k >= 2 && coin(sizes.priority_probability)) {
    std::size_t lo = uniform(0, k - 1), hi = uniform(0, k - 2);
    if (hi >= lo) ++hi;
    if (lo > hi) std::swap(lo, hi);  // ascending pairs cannot form cycles
    doc["priorities"] = ojson::array({{alphabet[lo], alphabet[hi]}});
  }
  ojson links = ojson::array();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && coin(sizes.extra_link_probability))
        links.push_back({"C" + std::to_string(i), "C" + std::to_string(j)});
  doc["communication"] = std::move(links);

  std::string risk = "false";
  if (coin(0.6)) {
    risk.clear();
    // Mostly two components in given locations at once, like a shared
    // resource; occasionally a single atom or a disjunction.
    const std::size_t atoms = m > 1 && coin(0.8) ? 2 : 1;
    const std::size_t first = uniform(0, m - 1);
    for (std::size_t a = 0; a < atoms; ++a) {
      const std::size_t c = a == 0 ? first : (first + uniform(1, m - 1)) % m;
      if (!risk.empty()) risk += coin(0.8) ? " & " : " | ";
      if (vars[c] > 0 && coin(0.3))
        risk += "C" + std::to_string(c) + "." + var_name(uniform(0, vars[c] - 1));
      else
        risk += "C" + std::to_string(c) + "@" + loc_name(uniform(0, locs[c] - 1));
    }
  }
  doc["risk"] = risk;
  return finish(doc);
}

}  // namespace prisyn
