#pragma once

// Reduced ordered binary decision diagrams with a fixed variable order.
// Variables are identified by their level; new variables are appended at
// the bottom. Nodes are never freed: a manager lives as long as the
// synthesis run that owns it. Not thread-safe.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace prisyn {

class BddManager {
 public:
  using Ref = std::uint32_t;
  static constexpr Ref kFalse = 0;
  static constexpr Ref kTrue = 1;
  static constexpr std::uint32_t kTerminalLevel = 0xffffffffu;

  explicit BddManager(std::uint32_t num_vars = 0);

  std::uint32_t add_var();
  std::uint32_t num_vars() const { return num_vars_; }
  std::size_t node_count() const { return nodes_.size(); }

  std::uint32_t level(Ref f) const { return nodes_[f].var; }
  Ref low(Ref f) const { return nodes_[f].lo; }
  Ref high(Ref f) const { return nodes_[f].hi; }

  Ref var(std::uint32_t v);
  Ref nvar(std::uint32_t v);
  Ref bdd_not(Ref f);
  Ref bdd_and(Ref f, Ref g);
  Ref bdd_or(Ref f, Ref g);
  Ref bdd_xor(Ref f, Ref g);
  Ref bdd_ite(Ref c, Ref t, Ref e) { return bdd_or(bdd_and(c, t), bdd_and(bdd_not(c), e)); }

  /// Positive cube over `vars` (any order).
  Ref cube(std::span<const std::uint32_t> vars);
  Ref exists(Ref f, Ref cube);
  /// ∃cube. f ∧ g without building f ∧ g.
  Ref and_exists(Ref f, Ref g, Ref cube);
  /// Relabel every variable v in f to v + delta. The caller guarantees the
  /// relabeling is order-preserving on f's support.
  Ref shift(Ref f, int delta);

  std::vector<std::uint32_t> support(Ref f) const;
  /// Number of satisfying assignments over `vars` (sorted ascending, must
  /// cover the support of f).
  double sat_count(Ref f, std::span<const std::uint32_t> vars) const;
  /// Visit every satisfying assignment over `vars` (sorted ascending,
  /// covering the support of f) in lexicographic order, false before true.
  void enumerate(Ref f, std::span<const std::uint32_t> vars,
                 const std::function<void(const std::vector<bool>&)>& visit) const;

 private:
  struct Node {
    std::uint32_t var;
    Ref lo;
    Ref hi;
  };
  struct CacheEntry {
    std::uint32_t op = 0;
    Ref a = 0, b = 0, c = 0;
    Ref result = 0;
  };
  enum Op : std::uint32_t { kOpNone = 0, kOpAnd, kOpOr, kOpXor, kOpNot, kOpExists, kOpAndExists, kOpShift };

  Ref make(std::uint32_t var, Ref lo, Ref hi);
  void grow_unique();
  void maybe_grow_cache();
  CacheEntry& slot(std::uint32_t op, Ref a, Ref b, Ref c);
  bool lookup(std::uint32_t op, Ref a, Ref b, Ref c, Ref& out);
  void store(std::uint32_t op, Ref a, Ref b, Ref c, Ref r);

  Ref shift_rec(Ref f, int delta);

  std::uint32_t num_vars_ = 0;
  std::vector<Node> nodes_;
  std::vector<Ref> unique_;  // open addressing; 0 marks an empty bucket
  std::vector<CacheEntry> cache_;
};

}  // namespace prisyn
