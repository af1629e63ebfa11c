#pragma once

// Explicit-state reference semantics: global and distributed enabledness,
// successor computation, breadth-first exploration, solution checking and
// a seeded distributed-execution simulator.

#include "prisyn/model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace prisyn {

struct Configuration {
  std::vector<std::uint32_t> locations;  // one per component
  std::vector<std::uint8_t> values;      // flattened; see System::var_offset

  bool operator==(const Configuration&) const = default;
  auto operator<=>(const Configuration&) const = default;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept;
};

Configuration initial_configuration(const System& sys);

/// True iff atom `a` (a location or variable atom) holds in `c`.
bool atom_holds(const System& sys, const Configuration& c, const Atom& a);
bool is_risk(const System& sys, const Configuration& c);

/// Interactions whose joint participation holds at `c` (priorities ignored).
std::vector<bool> joint_participation(const System& sys, const Configuration& c);
/// Deadlock ignores priorities: no interaction has joint participation.
bool is_deadlock(const System& sys, const Configuration& c);

/// Σ_c: joint participation and no higher-priority interaction with joint
/// participation. Sorted by interaction index.
std::vector<InteractionId> enabled(const System& sys, const Configuration& c);

/// Distributively-enabled interactions (visibility-qualified participation
/// and priority suppression).
std::vector<InteractionId> dist_enabled(const System& sys, const CommArchitecture& com,
                                        const Configuration& c);

/// σ-successors without checking priorities. Sorted, duplicate-free.
std::vector<Configuration> successors(const System& sys, const Configuration& c, InteractionId sigma);
/// σ-successors; throws std::invalid_argument unless σ ∈ enabled(sys, c).
std::vector<Configuration> step(const System& sys, const Configuration& c, InteractionId sigma);

struct Run {
  Configuration initial;
  std::vector<std::pair<InteractionId, Configuration>> steps;
};

/// One line per configuration: `<interaction> -> (loc_1,...,loc_m | C.v=0,...)`.
/// The first line uses `init` in place of an interaction.
std::string format_configuration(const System& sys, const Configuration& c);
std::string format_run(const System& sys, const Run& run);

class StateLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExploreOptions {
  std::size_t max_states = 10'000'000;
};

struct ExploreResult {
  std::vector<Configuration> reachable;  // breadth-first discovery order
  std::vector<std::size_t> deadlocks;    // indices into reachable
  std::vector<std::size_t> risks;
  std::optional<Run> counterexample;     // shortest run to a deadlock or risk configuration

  bool safe() const { return !counterexample.has_value(); }
};

ExploreResult explore(const System& sys, const ExploreOptions& opts = {});

struct VerifyResult {
  int violated_condition = 0;  // 0 = ok; otherwise 1, 2 or 3
  std::string message;
  std::optional<Run> counterexample;

  bool ok() const { return violated_condition == 0; }
};

/// Check the three solution conditions for `extra` added to the system's
/// priorities: closure irreflexive, architecture support of every closed
/// pair, and safety of the extended system.
VerifyResult verify_solution(const System& sys, const CommArchitecture& com, const PrioritySet& extra,
                             const ExploreOptions& opts = {});

/// Conditions 1 and 3 only.
VerifyResult verify_structure(const System& sys, const CommArchitecture& com, const PrioritySet& extra);

struct SimulationResult {
  enum class Verdict { NoViolation, Deadlock, Risk };
  Run run;
  Verdict verdict = Verdict::NoViolation;
};

const char* verdict_name(SimulationResult::Verdict v);

/// Seeded random distributed run: each step picks uniformly among the
/// distributively-enabled interactions, then uniformly among the
/// σ-successors. Stops at the first deadlock or risk configuration.
SimulationResult simulate_distributed(const System& sys, const CommArchitecture& com,
                                      std::uint64_t seed, std::size_t max_steps);

}  // namespace prisyn
