#include "prisyn/stateset.hpp"

#include <algorithm>
#include <stdexcept>

namespace prisyn {

const BddManager& StateSet::check(const StateSet& o) const {
  if (!mgr_ || mgr_ != o.mgr_) throw std::invalid_argument("state sets from different dictionaries");
  return *mgr_;
}

StateSet StateSet::operator!() const {
  if (!mgr_) throw std::invalid_argument("uninitialized state set");
  return {mgr_, mgr_->bdd_not(ref_)};
}

StateSet StateSet::operator&(const StateSet& o) const {
  check(o);
  return {mgr_, mgr_->bdd_and(ref_, o.ref_)};
}

StateSet StateSet::operator|(const StateSet& o) const {
  check(o);
  return {mgr_, mgr_->bdd_or(ref_, o.ref_)};
}

StateSet StateSet::operator^(const StateSet& o) const {
  check(o);
  return {mgr_, mgr_->bdd_xor(ref_, o.ref_)};
}

bool StateSet::operator==(const StateSet& o) const {
  check(o);
  return ref_ == o.ref_;
}

StateSet StateSet::exists(const VarSet& vars) const {
  if (!mgr_ || mgr_ != vars.mgr_) throw std::invalid_argument("variable set from a different dictionary");
  return {mgr_, mgr_->exists(ref_, vars.cube_)};
}

StateSet StateSet::and_exists(const StateSet& o, const VarSet& vars) const {
  check(o);
  if (mgr_ != vars.mgr_) throw std::invalid_argument("variable set from a different dictionary");
  return {mgr_, mgr_->and_exists(ref_, o.ref_, vars.cube_)};
}

StateSet StateSet::swap_primed() const {
  if (!mgr_) throw std::invalid_argument("uninitialized state set");
  const auto sup = mgr_->support(ref_);
  if (sup.empty()) return *this;
  const bool primed = (sup.front() & 1u) != 0;
  for (auto v : sup)
    if (((v & 1u) != 0) != primed) throw std::invalid_argument("swap_primed: support mixes primed and unprimed variables");
  return {mgr_, mgr_->shift(ref_, primed ? -1 : 1)};
}

double StateSet::count(const VarSet& vars) const {
  if (!mgr_ || mgr_ != vars.mgr_) throw std::invalid_argument("variable set from a different dictionary");
  return mgr_->sat_count(ref_, vars.levels());
}

void StateSet::enumerate(const VarSet& vars, const std::function<void(const std::vector<bool>&)>& visit) const {
  if (!mgr_ || mgr_ != vars.mgr_) throw std::invalid_argument("variable set from a different dictionary");
  mgr_->enumerate(ref_, vars.levels(), visit);
}

std::vector<std::uint32_t> StateSet::support() const {
  if (!mgr_) return {};
  return mgr_->support(ref_);
}

BoolVar VarDictionary::add(std::string name, VarRole role, std::size_t owner, std::size_t index) {
  const std::uint32_t level = mgr_->add_var();
  mgr_->add_var();
  infos_.push_back({std::move(name), role, owner, index});
  return {level};
}

StateSet VarDictionary::atom(BoolVar v) const { return {mgr_, mgr_->var(v.level)}; }

StateSet VarDictionary::encode(const std::vector<BoolVar>& vars, std::uint64_t value) const {
  if (vars.size() < 64 && (value >> vars.size()) != 0) throw std::out_of_range("value does not fit in the encoding");
  StateSet r = constant(true);
  for (std::size_t i = 0; i < vars.size(); ++i) r &= literal(vars[i], ((value >> i) & 1u) != 0);
  return r;
}

VarSet VarDictionary::make_set(std::vector<BoolVar> vars) const {
  VarSet s;
  s.mgr_ = mgr_;
  for (auto v : vars) s.levels_.push_back(v.level);
  std::sort(s.levels_.begin(), s.levels_.end());
  s.levels_.erase(std::unique(s.levels_.begin(), s.levels_.end()), s.levels_.end());
  s.cube_ = mgr_->cube(s.levels_);
  return s;
}

VarSet VarDictionary::unprimed() const {
  std::vector<BoolVar> vars;
  for (std::uint32_t i = 0; i < infos_.size(); ++i) vars.push_back({2 * i});
  return make_set(std::move(vars));
}

VarSet VarDictionary::primed() const {
  std::vector<BoolVar> vars;
  for (std::uint32_t i = 0; i < infos_.size(); ++i) vars.push_back({2 * i + 1});
  return make_set(std::move(vars));
}

}  // namespace prisyn
