#pragma once

// Small DPLL solver with watched-literal propagation and assumption cores.
// Literals use the DIMACS convention: variable v ≥ 1 is +v, its negation -v.

#include <string>
#include <vector>

namespace prisyn {

using Lit = int;

struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<Lit>> clauses;
  std::vector<Lit> assumptions;

  int new_var() { return ++num_vars; }
  /// Throws std::invalid_argument for an empty clause or an unknown variable.
  void add_clause(std::vector<Lit> clause);
};

struct SatResult {
  bool sat = false;
  std::vector<bool> model;  // indexed by variable; model[0] unused
  std::vector<Lit> core;    // assumptions only; empty for a clause-level conflict

  bool value(Lit l) const { return l > 0 ? model[l] : !model[-l]; }
};

struct SolveOptions {
  bool minimize_core = true;
};

/// Branching is deterministic: lowest-index unassigned variable, false first.
SatResult solve(const Cnf& cnf, const SolveOptions& opts = {});

/// Greedy drop-one minimization of an unsatisfiable assumption subset.
std::vector<Lit> minimize_core(const Cnf& cnf, std::vector<Lit> core);

bool satisfies(const Cnf& cnf, const std::vector<bool>& model);

/// DIMACS text; assumptions are emitted as `c assume` comment lines.
std::string to_dimacs(const Cnf& cnf);

}  // namespace prisyn
