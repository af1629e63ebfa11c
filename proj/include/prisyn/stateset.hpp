#pragma once

// Symbolic sets of game states over a dictionary of boolean variables.
//
// Every variable is allocated together with its primed twin, which sits
// directly below it in the order: unprimed variables have even levels,
// primed twins odd ones. swap_primed() relies on that layout.

#include "prisyn/bdd.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace prisyn {

class StateSet;

/// Handle to a dictionary variable (its BDD level).
struct BoolVar {
  std::uint32_t level = 0;
  bool primed() const { return (level & 1u) != 0; }
  BoolVar twin() const { return {level ^ 1u}; }
  auto operator<=>(const BoolVar&) const = default;
};

/// A set of variables, kept sorted by level, with its positive cube.
class VarSet {
 public:
  VarSet() = default;
  const std::vector<std::uint32_t>& levels() const { return levels_; }
  BddManager::Ref cube() const { return cube_; }
  std::size_t size() const { return levels_.size(); }

 private:
  friend class VarDictionary;
  std::shared_ptr<BddManager> mgr_;
  std::vector<std::uint32_t> levels_;
  BddManager::Ref cube_ = BddManager::kTrue;
  friend class StateSet;
};

class StateSet {
 public:
  StateSet() = default;
  StateSet(std::shared_ptr<BddManager> mgr, BddManager::Ref ref) : mgr_(std::move(mgr)), ref_(ref) {}

  bool is_false() const { return ref_ == BddManager::kFalse; }
  bool is_true() const { return ref_ == BddManager::kTrue; }
  BddManager::Ref ref() const { return ref_; }
  const std::shared_ptr<BddManager>& manager() const { return mgr_; }

  StateSet operator!() const;
  StateSet operator&(const StateSet& o) const;
  StateSet operator|(const StateSet& o) const;
  StateSet operator^(const StateSet& o) const;
  StateSet& operator&=(const StateSet& o) { return *this = *this & o; }
  StateSet& operator|=(const StateSet& o) { return *this = *this | o; }
  StateSet minus(const StateSet& o) const { return *this & !o; }
  StateSet iff(const StateSet& o) const { return !(*this ^ o); }
  StateSet implies(const StateSet& o) const { return (!*this) | o; }

  /// Canonical representation: semantic equality is node equality.
  bool operator==(const StateSet& o) const;
  bool subset_of(const StateSet& o) const { return minus(o).is_false(); }
  bool intersects(const StateSet& o) const { return !(*this & o).is_false(); }

  StateSet exists(const VarSet& vars) const;
  /// ∃vars. this ∧ o.
  StateSet and_exists(const StateSet& o, const VarSet& vars) const;
  /// Exchange primed and unprimed variables. Throws std::invalid_argument
  /// if the support mixes both kinds.
  StateSet swap_primed() const;

  double count(const VarSet& vars) const;
  /// Satisfying assignments over `vars` in lexicographic order of the
  /// level-sorted variables, false before true.
  void enumerate(const VarSet& vars, const std::function<void(const std::vector<bool>&)>& visit) const;
  std::vector<std::uint32_t> support() const;

 private:
  const BddManager& check(const StateSet& o) const;
  std::shared_ptr<BddManager> mgr_;
  BddManager::Ref ref_ = BddManager::kFalse;
};

enum class VarRole { Turn, Chosen, Interaction, Location, Data };

struct VarInfo {
  std::string name;  // unprimed name; primed twins append '\''
  VarRole role = VarRole::Data;
  std::size_t owner = 0;  // component or interaction index, role dependent
  std::size_t index = 0;  // bit or variable index within the owner
};

class VarDictionary {
 public:
  VarDictionary() : mgr_(std::make_shared<BddManager>()) {}

  /// Allocate an unprimed variable and its primed twin.
  BoolVar add(std::string name, VarRole role, std::size_t owner = 0, std::size_t index = 0);
  const VarInfo& info(BoolVar v) const { return infos_[v.level / 2]; }
  std::string name(BoolVar v) const { return v.primed() ? info(v).name + "'" : info(v).name; }
  std::size_t size() const { return infos_.size(); }

  StateSet constant(bool value) const {
    return {mgr_, value ? BddManager::kTrue : BddManager::kFalse};
  }
  StateSet atom(BoolVar v) const;
  StateSet literal(BoolVar v, bool value) const { return value ? atom(v) : !atom(v); }
  /// Conjunction binding `vars[i]` to bit i of `value` (LSB = vars[0]).
  StateSet encode(const std::vector<BoolVar>& vars, std::uint64_t value) const;

  VarSet make_set(std::vector<BoolVar> vars) const;
  VarSet unprimed() const;
  VarSet primed() const;

  const std::shared_ptr<BddManager>& manager() const { return mgr_; }

 private:
  std::shared_ptr<BddManager> mgr_;
  std::vector<VarInfo> infos_;
};

}  // namespace prisyn
