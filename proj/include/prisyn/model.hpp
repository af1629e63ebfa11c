#pragma once

// System of interacting components, priorities over interactions, and the
// communication architecture that constrains which intended moves are
// shared between components.

#include "prisyn/expr.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prisyn {

using InteractionId = std::size_t;
using ComponentId = std::size_t;
using LocationId = std::size_t;

/// Allowed post-values of one variable on a transition. `Keep` is the
/// default for variables a transition does not mention: the singleton set
/// holding the variable's current value.
enum class Update { Keep, SetFalse, SetTrue, Any };

struct Transition {
  LocationId source = 0;
  Expr guard = Expr::constant(true);
  InteractionId label = 0;
  std::vector<Update> updates;  // one entry per component variable
  LocationId target = 0;
};

struct Component {
  std::string name;
  std::vector<std::string> locations;
  LocationId initial_location = 0;
  std::vector<std::string> variables;
  std::vector<bool> initial_values;
  std::vector<Transition> transitions;

  std::optional<LocationId> find_location(std::string_view loc) const;
  std::optional<std::size_t> find_variable(std::string_view var) const;
};

/// The proposition "low ≺ high": `high` has priority over `low`.
struct Priority {
  InteractionId low = 0;
  InteractionId high = 0;
  auto operator<=>(const Priority&) const = default;
};

using PrioritySet = std::set<Priority>;

class CycleError : public std::runtime_error {
 public:
  CycleError(std::string message, std::vector<InteractionId> witness)
      : std::runtime_error(std::move(message)), witness_(std::move(witness)) {}
  /// Closed walk σ0 ≺ σ1 ≺ ... ≺ σ0 over the input pairs.
  const std::vector<InteractionId>& witness() const { return witness_; }

 private:
  std::vector<InteractionId> witness_;
};

/// Transitive closure of `pairs` over `n` interactions. Throws CycleError
/// if the closure contains σ ≺ σ.
PrioritySet close_priorities(const PrioritySet& pairs, std::size_t n);

class System {
 public:
  std::vector<Component> components;
  std::vector<std::string> alphabet;  // declaration order fixes enc(σ)
  PrioritySet priorities;             // always transitively closed
  Expr risk = Expr::constant(false);

  /// Recompute participant lists and lookup tables. Called by the loader
  /// and generators once components and alphabet are final.
  void finalize();

  std::size_t num_interactions() const { return alphabet.size(); }
  const std::vector<ComponentId>& participants(InteractionId s) const { return participants_[s]; }
  bool participates(ComponentId c, InteractionId s) const { return uses_[c][s]; }
  std::optional<InteractionId> find_interaction(std::string_view name) const;
  std::optional<ComponentId> find_component(std::string_view name) const;
  /// Offset of component `c`'s first variable in a flattened valuation.
  std::size_t var_offset(ComponentId c) const { return var_offset_[c]; }
  std::size_t total_variables() const { return var_offset_.empty() ? 0 : total_vars_; }

  /// Copy with priorities replaced by the closure of `p`.
  System with_priorities(const PrioritySet& p) const;

  std::string priority_name(const Priority& p) const {
    return alphabet[p.low] + " < " + alphabet[p.high];
  }

 private:
  std::vector<std::vector<ComponentId>> participants_;
  std::vector<std::vector<bool>> uses_;
  std::vector<std::size_t> var_offset_;
  std::size_t total_vars_ = 0;
};

/// Directed "informs" relation: `informs(i, j)` reads C_i ⇝ C_j.
class CommArchitecture {
 public:
  CommArchitecture() = default;
  explicit CommArchitecture(std::size_t num_components)
      : n_(num_components), m_(num_components * num_components, false) {}

  std::size_t size() const { return n_; }
  bool informs(ComponentId from, ComponentId to) const { return m_[from * n_ + to]; }
  void add(ComponentId from, ComponentId to) { m_[from * n_ + to] = true; }
  void remove(ComponentId from, ComponentId to) { m_[from * n_ + to] = false; }
  std::vector<std::pair<ComponentId, ComponentId>> pairs() const;

  static CommArchitecture fully_connected(std::size_t n);

 private:
  std::size_t n_ = 0;
  std::vector<bool> m_;
};

/// Self-transmission, group transmission and existing-priority transmission
/// pairs required for `sys` to be deployable.
CommArchitecture mandatory_architecture(const System& sys);

struct DeployViolation {
  enum class Kind { SelfTransmission, GroupTransmission, PriorityTransmission };
  Kind kind;
  ComponentId from = 0;
  ComponentId to = 0;
  InteractionId interaction = 0;  // shared interaction (group) or the high side
  std::optional<Priority> priority;
  std::string message;
};

/// Empty iff `com` is deployable for `sys`.
std::vector<DeployViolation> check_deployable(const System& sys, const CommArchitecture& com);

/// vis(τ, σ): τ's enabledness is visible to every component executing σ.
class VisTable {
 public:
  VisTable() = default;
  explicit VisTable(std::size_t n) : n_(n), m_(n * n, false) {}
  bool operator()(InteractionId tau, InteractionId sigma) const { return m_[tau * n_ + sigma]; }
  void set(InteractionId tau, InteractionId sigma, bool v) { m_[tau * n_ + sigma] = v; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<bool> m_;
};

VisTable compute_visibility(const System& sys, const CommArchitecture& com);

struct Model {
  System system;
  CommArchitecture architecture;
};

/// Parse and validate a JSON model document.
Model parse_system(std::string_view text);
Model load_model(const std::string& path);
/// Serialize back to the model document format.
std::string write_model(const System& sys, const CommArchitecture& com);

/// Parse "low < high" lines (blank lines and '#' comments ignored).
PrioritySet parse_priority_list(const System& sys, std::string_view text);
std::string format_priorities(const System& sys, const PrioritySet& p);

}  // namespace prisyn
