#include "prisyn/sat.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace prisyn {

void Cnf::add_clause(std::vector<Lit> clause) {
  if (clause.empty()) throw std::invalid_argument("empty clause");
  for (Lit l : clause)
    if (l == 0 || std::abs(l) > num_vars) throw std::invalid_argument("literal out of range");
  clauses.push_back(std::move(clause));
}

namespace {

using Deps = std::vector<int>;  // sorted variables whose value was decided, not implied

Deps merge(const Deps& a, const Deps& b) {
  Deps out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

class Solver {
 public:
  explicit Solver(const Cnf& cnf) : n_(cnf.num_vars) {
    value_.assign(n_ + 1, -1);
    reason_.assign(n_ + 1, -1);
    watches_.assign(2 * (n_ + 1), {});
    for (const auto& raw : cnf.clauses) {
      std::vector<Lit> c = raw;
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      bool taut = false;
      for (Lit l : c) taut = taut || std::binary_search(c.begin(), c.end(), -l);
      if (taut) continue;
      clauses_.push_back(std::move(c));
    }
  }

  /// nullopt = satisfiable; otherwise the dependency set of a refutation.
  std::optional<Deps> run(const std::vector<Lit>& assumptions) {
    for (int ci = 0; ci < static_cast<int>(clauses_.size()); ++ci) {
      const auto& c = clauses_[ci];
      if (c.size() == 1) {
        if (lit_value(c[0]) == 0) return cone(ci);
        if (lit_value(c[0]) == -1) assign(c[0], ci);
      } else {
        watches_[index(c[0])].push_back(ci);
        watches_[index(c[1])].push_back(ci);
      }
    }
    if (auto conflict = propagate()) return cone(*conflict);
    for (Lit a : assumptions) {
      const int v = std::abs(a);
      if (v > n_) throw std::invalid_argument("assumption out of range");
      if (lit_value(a) == 1) continue;
      if (lit_value(a) == 0) {
        Deps d = cone_of_var(v);
        return merge(d, {v});
      }
      assign(a, -1);
      if (auto conflict = propagate()) return cone(*conflict);
    }
    return search();
  }

  std::vector<bool> model() const {
    std::vector<bool> m(n_ + 1, false);
    for (int v = 1; v <= n_; ++v) m[v] = value_[v] == 1;
    return m;
  }

 private:
  static std::size_t index(Lit l) { return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0 ? 1 : 0); }

  int lit_value(Lit l) const {
    const int v = value_[std::abs(l)];
    if (v < 0) return -1;
    return (l > 0) == (v == 1) ? 1 : 0;
  }

  void assign(Lit l, int reason) {
    value_[std::abs(l)] = l > 0 ? 1 : 0;
    reason_[std::abs(l)] = reason;
    trail_.push_back(l);
  }

  void undo(std::size_t size) {
    while (trail_.size() > size) {
      const int v = std::abs(trail_.back());
      value_[v] = -1;
      reason_[v] = -1;
      trail_.pop_back();
    }
    qhead_ = std::min(qhead_, trail_.size());
  }

  /// Returns the index of a falsified clause, if any.
  std::optional<int> propagate() {
    while (qhead_ < trail_.size()) {
      const Lit falsified = -trail_[qhead_++];
      auto& ws = watches_[index(falsified)];
      for (std::size_t i = 0; i < ws.size();) {
        const int ci = ws[i];
        auto& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          ++i;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[index(c[1])].push_back(ci);
            ws[i] = ws.back();
            ws.pop_back();
            moved = true;
            break;
          }
        }
        if (moved) continue;
        if (lit_value(c[0]) == 0) return ci;
        assign(c[0], ci);
        ++i;
      }
    }
    return std::nullopt;
  }

  Deps cone_from(std::vector<int> stack) const {
    std::vector<bool> seen(n_ + 1, false);
    Deps out;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (seen[v]) continue;
      seen[v] = true;
      if (reason_[v] < 0) {
        out.push_back(v);
        continue;
      }
      for (Lit l : clauses_[reason_[v]])
        if (!seen[std::abs(l)]) stack.push_back(std::abs(l));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  Deps cone(int clause) const {
    std::vector<int> stack;
    for (Lit l : clauses_[clause]) stack.push_back(std::abs(l));
    return cone_from(std::move(stack));
  }

  Deps cone_of_var(int v) const { return cone_from({v}); }

  std::optional<Deps> search() {
    int v = 1;
    while (v <= n_ && value_[v] >= 0) ++v;
    if (v > n_) return std::nullopt;
    const std::size_t mark = trail_.size();
    Deps first;
    assign(-v, -1);
    if (auto conflict = propagate()) {
      first = cone(*conflict);
    } else if (auto sub = search()) {
      first = std::move(*sub);
    } else {
      return std::nullopt;
    }
    undo(mark);
    if (!std::binary_search(first.begin(), first.end(), v)) return first;
    Deps second;
    assign(v, -1);
    if (auto conflict = propagate()) {
      second = cone(*conflict);
    } else if (auto sub = search()) {
      second = std::move(*sub);
    } else {
      return std::nullopt;
    }
    undo(mark);
    Deps out = merge(first, second);
    out.erase(std::remove(out.begin(), out.end(), v), out.end());
    return out;
  }

  int n_;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> value_;
  std::vector<int> reason_;
  std::vector<Lit> trail_;
  std::size_t qhead_ = 0;
};

SatResult solve_once(const Cnf& cnf, const std::vector<Lit>& assumptions) {
  Solver s(cnf);
  SatResult r;
  auto deps = s.run(assumptions);
  if (!deps) {
    r.sat = true;
    r.model = s.model();
    return r;
  }
  // The refutation depends on decided variables only, all of them assumptions.
  for (Lit a : assumptions)
    if (std::binary_search(deps->begin(), deps->end(), std::abs(a)) &&
        std::find(r.core.begin(), r.core.end(), a) == r.core.end())
      r.core.push_back(a);
  return r;
}

}  // namespace

SatResult solve(const Cnf& cnf, const SolveOptions& opts) {
  SatResult r = solve_once(cnf, cnf.assumptions);
  if (!r.sat && opts.minimize_core) r.core = minimize_core(cnf, std::move(r.core));
  return r;
}

std::vector<Lit> minimize_core(const Cnf& cnf, std::vector<Lit> core) {
  for (std::size_t i = 0; i < core.size();) {
    std::vector<Lit> trial = core;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    SatResult r = solve_once(cnf, trial);
    if (r.sat) {
      ++i;
      continue;
    }
    // Keep the order of `core` while shrinking to the returned subset.
    std::vector<Lit> next;
    for (Lit l : trial)
      if (std::find(r.core.begin(), r.core.end(), l) != r.core.end()) next.push_back(l);
    std::size_t kept = 0;
    for (std::size_t k = 0; k < i; ++k)
      if (std::find(next.begin(), next.end(), core[k]) != next.end()) ++kept;
    core = std::move(next);
    i = kept;
  }
  return core;
}

bool satisfies(const Cnf& cnf, const std::vector<bool>& model) {
  if (model.size() < static_cast<std::size_t>(cnf.num_vars) + 1) return false;
  auto holds = [&](Lit l) { return l > 0 ? model[l] : !model[-l]; };
  for (const auto& c : cnf.clauses)
    if (std::none_of(c.begin(), c.end(), holds)) return false;
  return std::all_of(cnf.assumptions.begin(), cnf.assumptions.end(), holds);
}

std::string to_dimacs(const Cnf& cnf) {
  std::ostringstream os;
  for (Lit a : cnf.assumptions) os << "c assume " << a << "\n";
  os << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
  for (const auto& c : cnf.clauses) {
    for (Lit l : c) os << l << " ";
    os << "0\n";
  }
  return os.str();
}

}  // namespace prisyn
