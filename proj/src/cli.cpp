#include "prisyn/cli.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "prisyn/attractor.hpp"
#include "prisyn/bench.hpp"
#include "prisyn/explicit.hpp"
#include "prisyn/fixer.hpp"
#include "prisyn/game.hpp"
#include "prisyn/report.hpp"

namespace prisyn::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

RunReport base_report(const std::string& command, const std::string& text, const System& sys) {
  RunReport r;
  r.command = command;
  r.input_digest = input_digest(text);
  r.components = sys.components.size();
  r.interactions = sys.num_interactions();
  return r;
}

std::vector<std::pair<std::string, std::string>> named(const System& sys, const PrioritySet& p) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& x : p) out.emplace_back(sys.alphabet[x.low], sys.alphabet[x.high]);
  return out;
}

struct Args {
  std::string model;
  std::string priorities;
  std::string report;
  std::string dump_game;
  std::string dump_cnf;
  std::string strategy = "rp1";
  std::size_t max_iter = 32;
  bool over_approx = false;
  std::size_t max_states = 2'000'000;
  std::uint64_t seed = 0;
  std::size_t steps = 1000;
  std::string bench_name;
  std::size_t n = 10;
  std::string dir = "ccw";
  std::string output;
};

int cmd_validate(const Args& a, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(a.model);
  const Model m = parse_system(text);
  const auto violations = check_deployable(m.system, m.architecture);
  for (const auto& v : violations) err << v.message << "\n";
  if (!violations.empty()) return kViolation;
  out << "ok: " << m.system.components.size() << " components, " << m.system.num_interactions()
      << " interactions, " << m.system.priorities.size() << " priorities\n";
  return kOk;
}

int cmd_synthesize(const Args& a, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string text = read_file(a.model);
  const Model m = parse_system(text);
  const System& sys = m.system;
  const auto violations = check_deployable(sys, m.architecture);
  for (const auto& v : violations) err << v.message << "\n";
  if (!violations.empty()) return kViolation;

  if (!a.dump_game.empty()) {
    const GameEncoding enc = encode(sys, compute_visibility(sys, m.architecture));
    write_file(a.dump_game, export_dot(enc, reachable_states(enc, bad_states(enc))));
  }

  SynthesisOptions opts;
  opts.over_approx = a.over_approx;
  opts.strategy = a.strategy == "rp2" ? Strategy::RP2 : Strategy::RP1;
  opts.max_iter = a.max_iter;
  opts.explicit_verify_limit = a.max_states;
  const SynthesisResult res = synthesize(sys, m.architecture, opts);

  if (!a.dump_cnf.empty() && res.verdict == SynthesisResult::Verdict::Solved) {
    // Constraint system of the original game, for cross-checking.
    const VisTable vis = compute_visibility(sys, m.architecture);
    const Diagnosis d = diagnose(encode(sys, vis, opts.encode), opts.over_approx);
    const auto cands = extract_candidates(d.attractor.boundary, d.game);
    write_file(a.dump_cnf, to_dimacs(build_constraints(cands, sys.priorities, vis).cnf));
  }

  RunReport rep = base_report("synthesize", text, sys);
  rep.verdict = verdict_name(res.verdict);
  rep.reason = res.reason;
  rep.priorities = named(sys, res.priorities);
  rep.iterations = res.stats.iterations;
  rep.verification = res.verification;
  rep.trace = res.trace;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!a.report.empty()) write_file(a.report, rep.to_json());

  switch (res.verdict) {
    case SynthesisResult::Verdict::Solved:
      out << format_priorities(sys, res.priorities);
      return kOk;
    case SynthesisResult::Verdict::Infeasible:
      out << "infeasible: " << res.reason << "\n";
      return kInfeasible;
    case SynthesisResult::Verdict::GaveUp:
      out << "gave up: " << res.reason << "\n";
      return kGaveUp;
    case SynthesisResult::Verdict::Error:
      break;
  }
  err << res.reason << "\n";
  return kViolation;
}

int cmd_verify(const Args& a, std::ostream& out, std::ostream&) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string text = read_file(a.model);
  const Model m = parse_system(text);
  const PrioritySet extra = parse_priority_list(m.system, read_file(a.priorities));
  std::string method;
  const VerifyResult v = check_solution(m.system, m.architecture, extra, a.max_states, &method);

  RunReport rep = base_report("verify", text, m.system);
  rep.verdict = v.ok() ? "ok" : "violated";
  rep.reason = v.message;
  rep.priorities = named(m.system, extra);
  rep.verification = method;
  if (v.counterexample) rep.counterexample = lines_of(format_run(m.system.with_priorities(extra), *v.counterexample));
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!a.report.empty()) write_file(a.report, rep.to_json());

  if (v.ok()) {
    out << "ok (" << method << ")\n";
    return kOk;
  }
  out << v.message << "\n";
  for (const auto& line : rep.counterexample) out << line << "\n";
  return kViolation;
}

int cmd_simulate(const Args& a, std::ostream& out, std::ostream&) {
  const std::string text = read_file(a.model);
  const Model m = parse_system(text);
  PrioritySet all = m.system.priorities;
  if (!a.priorities.empty()) {
    const PrioritySet extra = parse_priority_list(m.system, read_file(a.priorities));
    all.insert(extra.begin(), extra.end());
  }
  const System sys = m.system.with_priorities(all);
  const SimulationResult sim = simulate_distributed(sys, m.architecture, a.seed, a.steps);
  if (!sim.run.steps.empty()) out << format_run(sys, sim.run);
  out << "verdict: " << verdict_name(sim.verdict) << "\n";

  if (!a.report.empty()) {
    RunReport rep = base_report("simulate", text, sys);
    rep.verdict = verdict_name(sim.verdict);
    rep.counterexample = lines_of(format_run(sys, sim.run));
    write_file(a.report, rep.to_json());
  }
  return sim.verdict == SimulationResult::Verdict::NoViolation ? kOk : kViolation;
}

int cmd_bench(const Args& a, std::ostream& out, std::ostream&) {
  Model m;
  if (a.bench_name == "fig1") {
    m = gen_fig1();
  } else if (a.bench_name == "philosophers") {
    m = gen_philosophers({a.n, parse_direction(a.dir)});
  } else {
    m = gen_random(a.seed);
  }
  const std::string doc = write_model(m.system, m.architecture);
  if (a.output.empty()) out << doc;
  else write_file(a.output, doc);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesize priorities that keep component systems out of deadlock and risk states", "prisyn"};
  app.require_subcommand(1);
  Args a;

  auto* validate = app.add_subcommand("validate", "Parse a model and check the architecture is deployable");
  validate->add_option("model", a.model, "Model document (JSON)")->required();

  auto* synth = app.add_subcommand("synthesize", "Synthesize additional priorities");
  synth->add_option("model", a.model, "Model document (JSON)")->required();
  synth->add_flag("--over-approx", a.over_approx, "Condemn every boundary source (coarser, converges faster)");
  synth->add_option("--strategy", a.strategy, "Refinement strategy on conflicts")
      ->check(CLI::IsMember({"rp1", "rp2"}));
  synth->add_option("--max-iter", a.max_iter, "Outer iteration budget");
  synth->add_option("--report", a.report, "Write a JSON report");
  synth->add_option("--max-states", a.max_states, "Explicit verification limit");
  synth->add_option("--dump-game", a.dump_game, "Write the initial game graph (Graphviz)");
  synth->add_option("--dump-cnf", a.dump_cnf, "Write the first constraint system (DIMACS)");

  auto* verify = app.add_subcommand("verify", "Check a priority set against the solution conditions");
  verify->add_option("model", a.model, "Model document (JSON)")->required();
  verify->add_option("priorities", a.priorities, "File with one `low < high` per line")->required();
  verify->add_option("--report", a.report, "Write a JSON report");
  verify->add_option("--max-states", a.max_states, "Explicit verification limit");

  auto* sim = app.add_subcommand("simulate", "Random distributed execution");
  sim->add_option("model", a.model, "Model document (JSON)")->required();
  sim->add_option("--seed", a.seed, "Random seed");
  sim->add_option("--steps", a.steps, "Maximum number of steps");
  sim->add_option("--priorities", a.priorities, "Extra priorities file");
  sim->add_option("--report", a.report, "Write a JSON report");

  auto* bench = app.add_subcommand("bench", "Generate a benchmark model");
  bench->add_option("name", a.bench_name, "fig1 | philosophers | random")
      ->required()
      ->check(CLI::IsMember({"fig1", "philosophers", "random"}));
  bench->add_option("--n", a.n, "Number of philosophers");
  bench->add_option("--dir", a.dir, "Notification direction")->check(CLI::IsMember({"cw", "ccw", "none"}));
  bench->add_option("--seed", a.seed, "Seed for random models");
  bench->add_option("-o,--output", a.output, "Output path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(a, out, err);
    if (synth->parsed()) return cmd_synthesize(a, out, err);
    if (verify->parsed()) return cmd_verify(a, out, err);
    if (sim->parsed()) return cmd_simulate(a, out, err);
    if (bench->parsed()) return cmd_bench(a, out, err);
  } catch (const CycleError& e) {
    err << "error: " << e.what() << "\n";
    return kViolation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace prisyn::cli
