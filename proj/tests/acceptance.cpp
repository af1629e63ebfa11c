// Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <sstream>
#include <tuple>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "prisyn/attractor.hpp"
#include "prisyn/bench.hpp"
#include "prisyn/cli.hpp"
#include "prisyn/fixer.hpp"

using namespace prisyn;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Accumulates failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  bool ok() const { return failures.empty(); }
};

struct Solved {
  std::string label;
  System system;
  CommArchitecture architecture;
  PrioritySet added;
};
std::vector<Solved> g_solved;  // every Solved result, for criterion 6

void record(const std::string& label, const Model& m, const SynthesisResult& r) {
  if (r.verdict == SynthesisResult::Verdict::Solved) g_solved.push_back({label, m.system, m.architecture, r.priorities});
}

std::string names(const System& sys, const PrioritySet& p) {
  std::string out = "{";
  for (const auto& x : p) out += (out.size() > 1 ? ", " : "") + sys.priority_name(x);
  return out + "}";
}

int cli_verify(const Model& m, const PrioritySet& p, std::string* output) {
  const fs::path dir = fs::temp_directory_path() / "prisyn-acceptance";
  fs::create_directories(dir);
  std::ofstream(dir / "model.json") << write_model(m.system, m.architecture);
  std::ofstream(dir / "prios.txt") << format_priorities(m.system, p);
  std::ostringstream out, err;
  const int code = cli::run({"verify", (dir / "model.json").string(), (dir / "prios.txt").string()}, out, err);
  *output = out.str() + err.str();
  fs::remove_all(dir);
  return code;
}

// 1. Two-resource system end to end.
void criterion1(Check& c) {
  const Model m = gen_fig1();
  const auto t0 = Clock::now();
  const SynthesisResult r = synthesize(m.system, m.architecture);
  const double t = since(t0);
  record("two-resource", m, r);
  c.expect(r.verdict == SynthesisResult::Verdict::Solved, std::string("verdict ") + verdict_name(r.verdict));
  c.expect(t < 1.0, "synthesis took " + std::to_string(t) + " s");

  std::string out;
  c.expect(cli_verify(m, r.priorities, &out) == cli::kOk, "returned set " + names(m.system, r.priorities) + ": " + out);
  const PrioritySet reference = fixtures::pairs(m.system, {{"a", "c"}, {"a", "d"}});
  c.expect(cli_verify(m, reference, &out) == cli::kOk, "{a<c, a<d}: " + out);
  const int code = cli_verify(m, fixtures::pairs(m.system, {{"a", "d"}, {"c", "b"}}), &out);
  c.expect(code == cli::kViolation && out.rfind("condition 3:", 0) == 0, "{a<d, c<b}: " + out);
}

// 2. Attractor internals on the two-resource game.
void criterion2(Check& c) {
  const Model m = gen_fig1();
  const System& sys = m.system;
  const Diagnosis d = diagnose(encode(sys, compute_visibility(sys, m.architecture)));
  const GameEncoding& enc = d.game;
  const auto s0 = fixtures::ctrl(sys, {"idle", "idle"});
  const auto s2 = fixtures::env(sys, "a", {"a", "c"}, {"idle", "idle"});
  const auto s3 = fixtures::ctrl(sys, {"used", "idle"});
  const auto s7 = fixtures::env(sys, "c", {"c"}, {"used", "idle"});
  const auto s8 = fixtures::ctrl(sys, {"idle", "used"});
  const auto s10 = fixtures::env(sys, "a", {"a", "d"}, {"idle", "used"});
  const auto s11 = fixtures::ctrl(sys, {"used", "used"});

  c.expect(fixtures::as_set(decode_states(enc, d.bad)) == std::set<GameState>{s11}, "bad set");
  c.expect(fixtures::as_set(decode_states(enc, risk_attractor(d.bad, enc))) == std::set<GameState>{s7, s10, s11},
           "risk attractor");
  c.expect(fixtures::as_set(decode_states(enc, d.attractor.nested)) == std::set<GameState>{s2, s3, s7, s10, s11},
           "nested risk attractor");
  const auto tf = decode_moves(enc, d.attractor.boundary);
  c.expect(std::set<GameMove>(tf.begin(), tf.end()) == std::set<GameMove>{{s0, s2}, {s8, s10}}, "T_f");
  const auto a = *sys.find_interaction("a");
  c.expect(extract_candidates(d.attractor.boundary, enc) ==
               std::vector<FixCandidate>{{a, {*sys.find_interaction("c")}}, {a, {*sys.find_interaction("d")}}},
           "fix candidates");
}

// 3. Four-interaction constraint system.
void criterion3(Check& c) {
  constexpr InteractionId A = 0, B = 1, C = 2, G = 3;
  const char* name[] = {"a", "b", "c", "g"};
  VisTable vis(4);
  for (auto [t, s] : {std::pair{C, A}, {B, A}, {C, B}, {A, G}, {A, B}}) vis.set(t, s, true);
  const std::vector<FixCandidate> cands{{A, {B, C}}, {G, {A}}, {B, {A}}};

  const Resolution plain = resolve(build_constraints(cands, {}, vis), {});
  c.expect(plain.sat, "constraint system is unsat");

  const PrioritySet model{{A, C}, {G, A}, {B, A}};
  const Resolution with_model = resolve(build_constraints(cands, model, vis), model);
  if (!with_model.sat) {
    std::string why;
    for (const auto& [lo, hi] : oracle::closure({{A, C}, {G, A}, {B, A}}, 4))
      if (!vis(hi, lo)) why += std::string(" ") + name[lo] + "<" + name[hi] + " is implied by transitivity but vis(" +
                               name[hi] + "," + name[lo] + ") is false;";
    c.expect(false, "{a<c, g<a, b<a} is not a model:" + why);
  }

  const PrioritySet forced{{A, B}, {G, B}, {B, A}};
  c.expect(!resolve(build_constraints(cands, forced, vis), forced).sat, "{a<b, g<b, b<a} is not unsat");
}

// 4. Dining philosophers.
void criterion4(Check& c) {
  auto run = [&](std::size_t n, Direction dir, double budget) {
    const Model m = gen_philosophers({n, dir});
    const auto t0 = Clock::now();
    const SynthesisResult r = synthesize(m.system, m.architecture);
    const double t = since(t0);
    const std::string label = "n=" + std::to_string(n) + " " + direction_name(dir);
    record("philosophers " + label, m, r);
    c.expect(t < budget, label + " took " + std::to_string(t) + " s");
    std::cout << "  philosophers " << label << ": " << verdict_name(r.verdict) << ", " << r.priorities.size()
              << " priorities, " << m.system.components.size() << " components, " << m.system.num_interactions()
              << " interactions, " << t << " s\n";
    return std::pair{m, r};
  };

  {
    const auto [m, r] = run(10, Direction::CounterClockwise, 60);
    c.expect(r.verdict == SynthesisResult::Verdict::Solved, "n=10 ccw not solved");
    c.expect(r.priorities.size() <= 10, "n=10 ccw added " + std::to_string(r.priorities.size()) + " priorities");
    const VerifyResult v = verify_solution(m.system, m.architecture, r.priorities);
    c.expect(v.ok(), "n=10 ccw explicit check: " + v.message);
  }
  for (Direction d : {Direction::Clockwise, Direction::None}) {
    const auto [m, r] = run(10, d, 60);
    c.expect(r.verdict == SynthesisResult::Verdict::Infeasible &&
                 r.reason == "initial state in nested-risk-attractor",
             std::string("n=10 ") + direction_name(d) + ": " + verdict_name(r.verdict) + " " + r.reason);
  }
  {
    const auto [m, r] = run(20, Direction::CounterClockwise, 120);
    c.expect(r.verdict == SynthesisResult::Verdict::Solved, "n=20 ccw not solved");
    c.expect(m.system.components.size() == 40 && m.system.num_interactions() == 60, "n=20 sizes");
    c.expect(r.priorities.size() <= 20, "n=20 ccw added " + std::to_string(r.priorities.size()) + " priorities");
  }
}

// 5. Symbolic pipeline against explicit oracles on random systems.
void criterion5(Check& c) {
  constexpr std::uint64_t kSeeds = 200;
  std::size_t configs = 0, fixed = 0;
  std::map<std::string, std::size_t> verdicts;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const Model m = gen_random(seed);
    const System& sys = m.system;
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    const VisTable vis = compute_visibility(sys, m.architecture);
    const GameEncoding enc = encode(sys, vis);

    for (const auto& cfg : oracle::all_configurations(sys)) {
      ++configs;
      const GameState cs = oracle::control_state(sys, cfg);
      const StateSet here = state_predicate(enc, cs);
      c.expect(enc.c_dead.intersects(here) == is_deadlock(sys, cfg), tag + "(a) deadlock mismatch");

      std::set<GameState> two;
      for (const auto& g : decode_states(enc, post_image(enc, post_image(enc, here)))) two.insert(g);
      std::set<GameState> expect;
      for (auto s : enabled(sys, cfg))
        for (const auto& n : step(sys, cfg, s)) expect.insert(oracle::control_state(sys, n));
      c.expect(two == expect, tag + "(b) two-step successors mismatch");
    }

    const Diagnosis d = diagnose(enc);
    const oracle::Graph g = oracle::build_game(sys, vis);
    const auto win = oracle::attractor(g, g.bad);
    std::set<GameState> expect;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      if (win[i]) expect.insert(g.nodes[i]);
    c.expect(fixtures::as_set(decode_states(enc, risk_attractor(d.bad, d.game))) == expect,
             tag + "(c) attractor mismatch");

    for (const auto& cfg : explore(sys).reachable)
      c.expect(dist_enabled(sys, m.architecture, cfg) == enabled(sys, cfg), tag + "(d) dist_enabled mismatch");

    // The generated architecture, plus two variants that see more fixes:
    // full connectivity with RP2, and over-approximated attractors.
    const Model wide{sys, CommArchitecture::fully_connected(sys.components.size())};
    SynthesisOptions rp2, over;
    rp2.strategy = Strategy::RP2;
    over.over_approx = true;
    const std::tuple<const char*, const Model*, SynthesisOptions> runs[] = {
        {"", &m, {}}, {" full rp2", &wide, rp2}, {" over", &m, over}};
    for (const auto& [variant, model, opts] : runs) {
      const SynthesisResult r = synthesize(sys, model->architecture, opts);
      c.expect(r.verdict != SynthesisResult::Verdict::Error, tag + variant + " (e) " + r.reason);
      ++verdicts[verdict_name(r.verdict)];
      if (r.verdict != SynthesisResult::Verdict::Solved) continue;
      fixed += !r.priorities.empty();
      record("random " + std::to_string(seed) + variant, *model, r);
      const VerifyResult v = verify_solution(sys, model->architecture, r.priorities);
      c.expect(v.ok(), tag + variant + " (e) " + v.message);
    }
  }
  std::cout << "  random systems: " << kSeeds << " seeds, " << configs << " configurations, " << 3 * kSeeds << " synthesis runs;";
  for (const auto& [v, k] : verdicts) std::cout << " " << k << " " << v << ";";
  std::cout << " " << fixed << " solved by adding priorities\n";
}

// 6. Invariants of every Solved priority set seen above.
void criterion6(Check& c) {
  for (const auto& s : g_solved) {
    std::set<std::pair<InteractionId, InteractionId>> all;
    for (const auto& p : s.system.priorities) all.insert({p.low, p.high});
    for (const auto& p : s.added) all.insert({p.low, p.high});
    const auto closed = oracle::closure(all, s.system.num_interactions());
    const VisTable vis = compute_visibility(s.system, s.architecture);
    for (const auto& [lo, hi] : closed) {
      c.expect(lo != hi, s.label + ": " + s.system.alphabet[lo] + " < itself");
      c.expect(vis(hi, lo), s.label + ": " + s.system.alphabet[lo] + " < " + s.system.alphabet[hi] + " unsupported");
    }
    c.expect(oracle::closure(closed, s.system.num_interactions()) == closed, s.label + ": closure not transitive");
    // The library's own closure must agree.
    PrioritySet lib;
    for (const auto& [lo, hi] : all) lib.insert({lo, hi});
    PrioritySet mine;
    for (const auto& [lo, hi] : closed) mine.insert({lo, hi});
    c.expect(s.system.with_priorities(lib).priorities == mine, s.label + ": closure differs from the library's");
  }
  std::cout << "  checked " << g_solved.size() << " solved results\n";
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<void(Check&)>>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5}, {6, criterion6}};
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    Check c;
    const auto t0 = Clock::now();
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << id << ": " << (c.ok() ? "PASS" : "FAIL") << " (" << since(t0) << " s)\n";
    constexpr std::size_t kShown = 5;
    for (std::size_t i = 0; i < c.failures.size() && i < kShown; ++i) std::cout << "  " << c.failures[i] << "\n";
    if (c.failures.size() > kShown) std::cout << "  ... " << c.failures.size() - kShown << " more\n";
    failed += !c.ok();
  }
  return failed == 0 ? 0 : 1;
}
