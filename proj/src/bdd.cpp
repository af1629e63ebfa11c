#include "prisyn/bdd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace prisyn {

namespace {

inline std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = a * 0x9E3779B97F4A7C15ull;
  h ^= b + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
  h ^= c * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
  return h ^ (h >> 29);
}

constexpr std::size_t kMaxCache = std::size_t{1} << 23;

}  // namespace

BddManager::BddManager(std::uint32_t num_vars) : num_vars_(num_vars) {
  nodes_.push_back({kTerminalLevel, kFalse, kFalse});
  nodes_.push_back({kTerminalLevel, kTrue, kTrue});
  unique_.assign(1u << 16, 0);
  cache_.resize(1u << 16);
}

std::uint32_t BddManager::add_var() { return num_vars_++; }

void BddManager::grow_unique() {
  std::vector<Ref> fresh(unique_.size() * 2, 0);
  const std::size_t mask = fresh.size() - 1;
  for (Ref r = 2; r < nodes_.size(); ++r) {
    const Node& n = nodes_[r];
    std::size_t i = hash3(n.var, n.lo, n.hi) & mask;
    while (fresh[i] != 0) i = (i + 1) & mask;
    fresh[i] = r;
  }
  unique_.swap(fresh);
}

void BddManager::maybe_grow_cache() {
  if (cache_.size() >= kMaxCache || nodes_.size() < cache_.size()) return;
  cache_.assign(std::min(cache_.size() * 4, kMaxCache), CacheEntry{});
}

BddManager::Ref BddManager::make(std::uint32_t var, Ref lo, Ref hi) {
  if (lo == hi) return lo;
  const std::size_t mask = unique_.size() - 1;
  std::size_t i = hash3(var, lo, hi) & mask;
  while (unique_[i] != 0) {
    const Node& n = nodes_[unique_[i]];
    if (n.var == var && n.lo == lo && n.hi == hi) return unique_[i];
    i = (i + 1) & mask;
  }
  if (nodes_.size() >= 0xfffffff0u) throw std::length_error("BDD node table exhausted");
  const Ref r = static_cast<Ref>(nodes_.size());
  nodes_.push_back({var, lo, hi});
  unique_[i] = r;
  if (nodes_.size() * 2 > unique_.size()) {
    grow_unique();
    maybe_grow_cache();
  }
  return r;
}

BddManager::CacheEntry& BddManager::slot(std::uint32_t op, Ref a, Ref b, Ref c) {
  return cache_[hash3(a, b, (static_cast<std::uint64_t>(c) << 4) | op) & (cache_.size() - 1)];
}

bool BddManager::lookup(std::uint32_t op, Ref a, Ref b, Ref c, Ref& out) {
  const CacheEntry& e = slot(op, a, b, c);
  if (e.op == op && e.a == a && e.b == b && e.c == c) {
    out = e.result;
    return true;
  }
  return false;
}

void BddManager::store(std::uint32_t op, Ref a, Ref b, Ref c, Ref r) { slot(op, a, b, c) = {op, a, b, c, r}; }

BddManager::Ref BddManager::var(std::uint32_t v) {
  if (v >= num_vars_) throw std::out_of_range("BDD variable out of range");
  return make(v, kFalse, kTrue);
}

BddManager::Ref BddManager::nvar(std::uint32_t v) {
  if (v >= num_vars_) throw std::out_of_range("BDD variable out of range");
  return make(v, kTrue, kFalse);
}

BddManager::Ref BddManager::bdd_not(Ref f) {
  if (f == kFalse) return kTrue;
  if (f == kTrue) return kFalse;
  Ref r;
  if (lookup(kOpNot, f, 0, 0, r)) return r;
  const Node n = nodes_[f];
  const Ref lo = bdd_not(n.lo);
  const Ref hi = bdd_not(n.hi);
  r = make(n.var, lo, hi);
  store(kOpNot, f, 0, 0, r);
  return r;
}

BddManager::Ref BddManager::bdd_and(Ref f, Ref g) {
  if (f == kFalse || g == kFalse) return kFalse;
  if (f == kTrue) return g;
  if (g == kTrue || f == g) return f;
  if (f > g) std::swap(f, g);
  Ref r;
  if (lookup(kOpAnd, f, g, 0, r)) return r;
  const Node nf = nodes_[f];
  const Node ng = nodes_[g];
  const std::uint32_t top = std::min(nf.var, ng.var);
  const Ref f0 = nf.var == top ? nf.lo : f, f1 = nf.var == top ? nf.hi : f;
  const Ref g0 = ng.var == top ? ng.lo : g, g1 = ng.var == top ? ng.hi : g;
  const Ref lo = bdd_and(f0, g0);
  const Ref hi = bdd_and(f1, g1);
  r = make(top, lo, hi);
  store(kOpAnd, f, g, 0, r);
  return r;
}

BddManager::Ref BddManager::bdd_or(Ref f, Ref g) {
  if (f == kTrue || g == kTrue) return kTrue;
  if (f == kFalse) return g;
  if (g == kFalse || f == g) return f;
  if (f > g) std::swap(f, g);
  Ref r;
  if (lookup(kOpOr, f, g, 0, r)) return r;
  const Node nf = nodes_[f];
  const Node ng = nodes_[g];
  const std::uint32_t top = std::min(nf.var, ng.var);
  const Ref f0 = nf.var == top ? nf.lo : f, f1 = nf.var == top ? nf.hi : f;
  const Ref g0 = ng.var == top ? ng.lo : g, g1 = ng.var == top ? ng.hi : g;
  const Ref lo = bdd_or(f0, g0);
  const Ref hi = bdd_or(f1, g1);
  r = make(top, lo, hi);
  store(kOpOr, f, g, 0, r);
  return r;
}

BddManager::Ref BddManager::bdd_xor(Ref f, Ref g) {
  if (f == g) return kFalse;
  if (f == kFalse) return g;
  if (g == kFalse) return f;
  if (f == kTrue) return bdd_not(g);
  if (g == kTrue) return bdd_not(f);
  if (f > g) std::swap(f, g);
  Ref r;
  if (lookup(kOpXor, f, g, 0, r)) return r;
  const Node nf = nodes_[f];
  const Node ng = nodes_[g];
  const std::uint32_t top = std::min(nf.var, ng.var);
  const Ref f0 = nf.var == top ? nf.lo : f, f1 = nf.var == top ? nf.hi : f;
  const Ref g0 = ng.var == top ? ng.lo : g, g1 = ng.var == top ? ng.hi : g;
  const Ref lo = bdd_xor(f0, g0);
  const Ref hi = bdd_xor(f1, g1);
  r = make(top, lo, hi);
  store(kOpXor, f, g, 0, r);
  return r;
}

BddManager::Ref BddManager::cube(std::span<const std::uint32_t> vars) {
  std::vector<std::uint32_t> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Ref r = kTrue;
  for (auto v : sorted) {
    if (v >= num_vars_) throw std::out_of_range("BDD variable out of range");
    r = make(v, kFalse, r);
  }
  return r;
}

BddManager::Ref BddManager::exists(Ref f, Ref cube) {
  if (f <= kTrue || cube == kTrue) return f;
  const Node nf = nodes_[f];
  while (cube != kTrue && nodes_[cube].var < nf.var) cube = nodes_[cube].hi;
  if (cube == kTrue) return f;
  Ref r;
  if (lookup(kOpExists, f, cube, 0, r)) return r;
  if (nodes_[cube].var == nf.var) {
    const Ref rest = nodes_[cube].hi;
    const Ref lo = exists(nf.lo, rest);
    r = lo == kTrue ? kTrue : bdd_or(lo, exists(nf.hi, rest));
  } else {
    const Ref lo = exists(nf.lo, cube);
    const Ref hi = exists(nf.hi, cube);
    r = make(nf.var, lo, hi);
  }
  store(kOpExists, f, cube, 0, r);
  return r;
}

BddManager::Ref BddManager::and_exists(Ref f, Ref g, Ref cube) {
  if (f == kFalse || g == kFalse) return kFalse;
  if (f == kTrue && g == kTrue) return kTrue;
  if (f == kTrue || f == g) return exists(g, cube);
  if (g == kTrue) return exists(f, cube);
  if (cube == kTrue) return bdd_and(f, g);
  if (f > g) std::swap(f, g);
  const Node nf = nodes_[f];
  const Node ng = nodes_[g];
  const std::uint32_t top = std::min(nf.var, ng.var);
  while (cube != kTrue && nodes_[cube].var < top) cube = nodes_[cube].hi;
  if (cube == kTrue) return bdd_and(f, g);
  Ref r;
  if (lookup(kOpAndExists, f, g, cube, r)) return r;
  const Ref f0 = nf.var == top ? nf.lo : f, f1 = nf.var == top ? nf.hi : f;
  const Ref g0 = ng.var == top ? ng.lo : g, g1 = ng.var == top ? ng.hi : g;
  if (nodes_[cube].var == top) {
    const Ref rest = nodes_[cube].hi;
    const Ref lo = and_exists(f0, g0, rest);
    r = lo == kTrue ? kTrue : bdd_or(lo, and_exists(f1, g1, rest));
  } else {
    const Ref lo = and_exists(f0, g0, cube);
    const Ref hi = and_exists(f1, g1, cube);
    r = make(top, lo, hi);
  }
  store(kOpAndExists, f, g, cube, r);
  return r;
}

BddManager::Ref BddManager::shift_rec(Ref f, int delta) {
  if (f <= kTrue) return f;
  const Ref key = static_cast<Ref>(delta + 0x40000000);
  Ref r;
  if (lookup(kOpShift, f, key, 0, r)) return r;
  const Node n = nodes_[f];
  const Ref lo = shift_rec(n.lo, delta);
  const Ref hi = shift_rec(n.hi, delta);
  r = make(static_cast<std::uint32_t>(static_cast<std::int64_t>(n.var) + delta), lo, hi);
  store(kOpShift, f, key, 0, r);
  return r;
}

BddManager::Ref BddManager::shift(Ref f, int delta) {
  if (delta == 0) return f;
  for (auto v : support(f)) {
    const std::int64_t t = static_cast<std::int64_t>(v) + delta;
    if (t < 0 || t >= num_vars_) throw std::out_of_range("BDD shift leaves the variable range");
  }
  return shift_rec(f, delta);
}

std::vector<std::uint32_t> BddManager::support(Ref f) const {
  std::vector<bool> seen_var(num_vars_, false);
  std::vector<Ref> stack{f};
  std::unordered_map<Ref, bool> visited;
  while (!stack.empty()) {
    Ref r = stack.back();
    stack.pop_back();
    if (r <= kTrue || !visited.emplace(r, true).second) continue;
    seen_var[nodes_[r].var] = true;
    stack.push_back(nodes_[r].lo);
    stack.push_back(nodes_[r].hi);
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < num_vars_; ++v)
    if (seen_var[v]) out.push_back(v);
  return out;
}

double BddManager::sat_count(Ref f, std::span<const std::uint32_t> vars) const {
  std::unordered_map<std::uint32_t, std::size_t> pos;
  for (std::size_t i = 0; i < vars.size(); ++i) pos[vars[i]] = i;
  auto position = [&](Ref r) -> std::size_t {
    if (r <= kTrue) return vars.size();
    auto it = pos.find(nodes_[r].var);
    if (it == pos.end()) throw std::invalid_argument("sat_count: variable set does not cover the support");
    return it->second;
  };
  std::unordered_map<Ref, double> memo;
  auto rec = [&](auto&& self, Ref r) -> double {
    if (r == kFalse) return 0.0;
    if (r == kTrue) return 1.0;
    if (auto it = memo.find(r); it != memo.end()) return it->second;
    const std::size_t p = position(r);
    const Node& n = nodes_[r];
    const double lo = self(self, n.lo) * std::ldexp(1.0, static_cast<int>(position(n.lo) - p - 1));
    const double hi = self(self, n.hi) * std::ldexp(1.0, static_cast<int>(position(n.hi) - p - 1));
    return memo[r] = lo + hi;
  };
  return rec(rec, f) * std::ldexp(1.0, static_cast<int>(position(f)));
}

void BddManager::enumerate(Ref f, std::span<const std::uint32_t> vars,
                           const std::function<void(const std::vector<bool>&)>& visit) const {
  std::vector<bool> assignment(vars.size(), false);
  auto rec = [&](auto&& self, Ref r, std::size_t i) -> void {
    if (r == kFalse) return;
    if (i == vars.size()) {
      if (r != kTrue) throw std::invalid_argument("enumerate: variable set does not cover the support");
      visit(assignment);
      return;
    }
    const std::uint32_t v = vars[i];
    const std::uint32_t top = nodes_[r].var;
    if (top < v) throw std::invalid_argument("enumerate: variable set does not cover the support");
    const Ref lo = top == v ? nodes_[r].lo : r;
    const Ref hi = top == v ? nodes_[r].hi : r;
    assignment[i] = false;
    self(self, lo, i + 1);
    assignment[i] = true;
    self(self, hi, i + 1);
  };
  rec(rec, f, 0);
}

}  // namespace prisyn
