#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace prisyn {

/// Thrown for malformed model documents and expressions.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AtomKind { Unresolved, Variable, Location };

/// A leaf of a guard or risk expression. Guards name local variables
/// ("x"); risk expressions name "Comp@loc" or "Comp.var". After model
/// validation `component`/`index` point into the owning System.
struct Atom {
  std::string text;
  AtomKind kind = AtomKind::Unresolved;
  std::size_t component = 0;
  std::size_t index = 0;
};

/// Boolean expression tree: constants, atoms, negation, binary and/or.
class Expr {
 public:
  enum class Op { Const, Atom, Not, And, Or };

  Expr() = default;
  static Expr constant(bool value);
  static Expr atom(std::string text);
  static Expr negate(Expr e);
  static Expr conj(Expr lhs, Expr rhs);
  static Expr disj(Expr lhs, Expr rhs);

  Op op() const { return op_; }
  bool value() const { return value_; }
  const Atom& atom_ref() const { return atom_; }
  Atom& atom_ref() { return atom_; }
  const std::vector<Expr>& children() const { return kids_; }
  std::vector<Expr>& children() { return kids_; }

  /// Fold the tree bottom-up. `leaf` maps constants/atoms to T; `not_`,
  /// `and_`, `or_` combine.
  template <class T, class Leaf, class Not, class And, class Or>
  T fold(Leaf&& leaf, Not&& not_, And&& and_, Or&& or_) const {
    switch (op_) {
      case Op::Const:
      case Op::Atom:
        return leaf(*this);
      case Op::Not:
        return not_(kids_[0].fold<T>(leaf, not_, and_, or_));
      case Op::And:
        return and_(kids_[0].fold<T>(leaf, not_, and_, or_),
                    kids_[1].fold<T>(leaf, not_, and_, or_));
      case Op::Or:
        return or_(kids_[0].fold<T>(leaf, not_, and_, or_),
                   kids_[1].fold<T>(leaf, not_, and_, or_));
    }
    throw std::logic_error("unreachable expression op");
  }

  /// Evaluate with `value_of(const Atom&) -> bool`.
  template <class F>
  bool evaluate(F&& value_of) const {
    switch (op_) {
      case Op::Const: return value_;
      case Op::Atom: return value_of(atom_);
      case Op::Not: return !kids_[0].evaluate(value_of);
      case Op::And: return kids_[0].evaluate(value_of) && kids_[1].evaluate(value_of);
      case Op::Or: return kids_[0].evaluate(value_of) || kids_[1].evaluate(value_of);
    }
    return false;
  }

  /// Apply `f(Atom&)` to every atom.
  template <class F>
  void for_each_atom(F&& f) {
    if (op_ == Op::Atom) f(atom_);
    for (auto& k : kids_) k.for_each_atom(f);
  }

  std::string to_string() const;

 private:
  Op op_ = Op::Const;
  bool value_ = true;
  Atom atom_;
  std::vector<Expr> kids_;
};

/// Parse `expr := true | false | atom | !expr | expr & expr | expr | expr | (expr)`.
/// `!` binds tighter than `&`, which binds tighter than `|`.
Expr parse_expr(std::string_view text);

}  // namespace prisyn
