#pragma once

// Fix-candidate extraction, the priority constraint system, conflict
// resolution and the outer diagnose-and-fix loop.

#include "prisyn/attractor.hpp"
#include "prisyn/game.hpp"
#include "prisyn/model.hpp"
#include "prisyn/sat.hpp"

#include <map>
#include <string>
#include <vector>

namespace prisyn {

/// A boundary move choosing `chosen` while every interaction in `escapes`
/// was visible and enabled: one of `chosen ≺ e` would block it.
struct FixCandidate {
  InteractionId chosen = 0;
  std::vector<InteractionId> escapes;  // sorted, nonempty, excludes chosen
  auto operator<=>(const FixCandidate&) const = default;
};

/// Distinct (chosen, escapes) combinations of the boundary moves, sorted.
std::vector<FixCandidate> extract_candidates(const StateSet& boundary, const GameEncoding& enc);

struct PriorityCnf {
  Cnf cnf;
  std::vector<InteractionId> universe;
  std::map<Priority, int> var;                   // includes σ ≺ σ
  std::map<Lit, std::size_t> selector;           // assumption → candidate index
  std::map<Lit, Priority> asserted;              // assumption → existing pair
  std::vector<FixCandidate> candidates;

  Priority pair_of(int v) const;
};

/// Constraints over the interactions used by `cands` and `existing`:
/// (1) one clause per candidate, guarded by an assumed selector;
/// (2) every existing pair as an assumption; (3) irreflexivity;
/// (4) transitivity; (5) no pair the architecture cannot support;
/// (6) no two pairs whose transitive consequence it cannot support.
/// Every set in `blocked` adds a clause forbidding that exact combination.
PriorityCnf build_constraints(const std::vector<FixCandidate>& cands, const PrioritySet& existing,
                              const VisTable& vis, const std::vector<PrioritySet>& blocked = {});

struct Resolution {
  bool sat = false;
  PrioritySet fix;                 // true pairs not in `existing`
  PrioritySet core;                // pairs named by the unsatisfiable core
  std::vector<std::size_t> core_candidates;
};

Resolution resolve(const PriorityCnf& pcnf, const PrioritySet& existing);

enum class Strategy { RP1, RP2 };

/// Pairs to assert next. RP1 picks the first usable pair in declaration
/// order; RP2 a greedy maximal subset that keeps the closure acyclic and
/// supported. A pair is usable if it is new, not blocked on its own, and
/// supported by `vis`. Throws std::invalid_argument for an empty core.
PrioritySet core_guided_refine(const PrioritySet& core, Strategy strategy, const VisTable& vis,
                               const PrioritySet& current = {}, const std::vector<PrioritySet>& blocked = {});

struct SynthesisOptions {
  bool over_approx = false;
  Strategy strategy = Strategy::RP1;
  std::size_t max_iter = 32;
  EncodeOptions encode;
  /// Above this many configurations the final check is done symbolically.
  std::size_t explicit_verify_limit = 2'000'000;
};

struct SynthesisStats {
  double encode_seconds = 0;
  double attractor_seconds = 0;
  double sat_seconds = 0;
  double verify_seconds = 0;
  double total_seconds = 0;
  std::size_t iterations = 0;
  std::size_t components = 0;
  std::size_t interactions = 0;
};

struct SynthesisResult {
  enum class Verdict { Solved, Infeasible, GaveUp, Error };
  Verdict verdict = Verdict::Error;
  PrioritySet priorities;  // P_d+
  std::string reason;
  PrioritySet last_core;
  std::string verification;  // "explicit", "symbolic" or empty
  SynthesisStats stats;
  std::vector<std::string> trace;
};

const char* verdict_name(SynthesisResult::Verdict v);

/// Throws std::invalid_argument if `com` is not deployable for `sys`.
SynthesisResult synthesize(const System& sys, const CommArchitecture& com, const SynthesisOptions& opts = {});

/// Check a priority extension, explicitly when the state space fits
/// `explicit_limit`, otherwise symbolically. `method` receives which.
VerifyResult check_solution(const System& sys, const CommArchitecture& com, const PrioritySet& extra,
                            std::size_t explicit_limit, std::string* method = nullptr);

}  // namespace prisyn
