#include "prisyn/expr.hpp"

#include <cctype>

namespace prisyn {

Expr Expr::constant(bool value) {
  Expr e;
  e.op_ = Op::Const;
  e.value_ = value;
  return e;
}

Expr Expr::atom(std::string text) {
  Expr e;
  e.op_ = Op::Atom;
  e.atom_.text = std::move(text);
  return e;
}

Expr Expr::negate(Expr inner) {
  Expr e;
  e.op_ = Op::Not;
  e.kids_.push_back(std::move(inner));
  return e;
}

Expr Expr::conj(Expr lhs, Expr rhs) {
  Expr e;
  e.op_ = Op::And;
  e.kids_.push_back(std::move(lhs));
  e.kids_.push_back(std::move(rhs));
  return e;
}

Expr Expr::disj(Expr lhs, Expr rhs) {
  Expr e;
  e.op_ = Op::Or;
  e.kids_.push_back(std::move(lhs));
  e.kids_.push_back(std::move(rhs));
  return e;
}

namespace {

int precedence(Expr::Op op) {
  switch (op) {
    case Expr::Op::Or: return 1;
    case Expr::Op::And: return 2;
    case Expr::Op::Not: return 3;
    default: return 4;
  }
}

void print(const Expr& e, std::string& out, int parent_prec) {
  const int prec = precedence(e.op());
  const bool paren = prec < parent_prec;
  if (paren) out += '(';
  switch (e.op()) {
    case Expr::Op::Const:
      out += e.value() ? "true" : "false";
      break;
    case Expr::Op::Atom:
      out += e.atom_ref().text;
      break;
    case Expr::Op::Not:
      out += '!';
      print(e.children()[0], out, prec);
      break;
    case Expr::Op::And:
    case Expr::Op::Or:
      print(e.children()[0], out, prec);
      out += e.op() == Expr::Op::And ? " & " : " | ";
      // Right operand printed with higher bar so the tree shape survives.
      print(e.children()[1], out, prec + 1);
      break;
  }
  if (paren) out += ')';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = parse_or();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("syntax error in expression \"" + std::string(text_) +
                     "\" at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (accept('|')) lhs = Expr::disj(std::move(lhs), parse_and());
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_unary();
    while (accept('&')) lhs = Expr::conj(std::move(lhs), parse_unary());
    return lhs;
  }

  Expr parse_unary() {
    if (accept('!')) return Expr::negate(parse_unary());
    if (accept('(')) {
      Expr inner = parse_or();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    return parse_atom();
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string ident() {
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected identifier");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    std::string name = ident();
    if (pos_ < text_.size() && (text_[pos_] == '@' || text_[pos_] == '.')) {
      name += text_[pos_++];
      name += ident();
    }
    if (name == "true") return Expr::constant(true);
    if (name == "false") return Expr::constant(false);
    return Expr::atom(std::move(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Expr::to_string() const {
  std::string out;
  print(*this, out, 0);
  return out;
}

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace prisyn
