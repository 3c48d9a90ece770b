#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "confract/scalar_fn.hpp"

namespace confract {

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Node of a parsed arithmetic expression over variables named in the parse
/// call (normally t, or t and x).
struct ExprNode {
  enum class Kind { Constant, Variable, Unary, Binary, Call };

  Kind kind = Kind::Constant;
  double number = 0.0;            // Constant
  std::string name;               // Variable or Call
  char op = 0;                    // Unary '-' or Binary + - * / ^
  std::vector<ExprPtr> children;  // 1 for Unary, 2 for Binary, arity for Call
};

/// Parse failure; offset is the byte position in the source string where the
/// problem was detected.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

namespace detail {

inline int call_arity(std::string_view name) {
  if (name == "exp" || name == "sqrt" || name == "sin" || name == "cos" || name == "abs") return 1;
  if (name == "pow") return 2;
  return -1;
}

// Recursive-descent parser for
//   expr   := term {('+' | '-') term}
//   term   := unary {('*' | '/') unary}
//   unary  := '-' unary | power
//   power  := primary ['^' unary]        (right-associative)
//   primary:= number | name ['(' expr {',' expr} ')'] | '(' expr ')'
// over a fixed set of variable names and the functions listed above.
class ExprParser {
 public:
  ExprParser(std::string_view src, const std::set<std::string, std::less<>>& vars)
      : src_(src), vars_(vars) {}

  ExprPtr parse() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", 0);
    ExprPtr e = expr(0);
    skip_ws();
    if (pos_ < src_.size())
      throw ParseError("unexpected trailing input '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  static constexpr int kMaxDepth = 200;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  void check_depth(int depth) {
    if (depth > kMaxDepth) throw ParseError("expression nested too deeply", pos_);
  }

  ExprPtr expr(int depth) {
    check_depth(depth);
    ExprPtr lhs = term(depth + 1);
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      lhs = binary(c, lhs, term(depth + 1));
    }
  }

  ExprPtr term(int depth) {
    check_depth(depth);
    ExprPtr lhs = unary(depth + 1);
    for (;;) {
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      lhs = binary(c, lhs, unary(depth + 1));
    }
  }

  ExprPtr unary(int depth) {
    check_depth(depth);
    if (eat('-')) {
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::Unary;
      n->op = '-';
      n->children.push_back(unary(depth + 1));
      return n;
    }
    return power(depth + 1);
  }

  ExprPtr power(int depth) {
    check_depth(depth);
    ExprPtr base = primary(depth + 1);
    if (eat('^')) return binary('^', base, unary(depth + 1));
    return base;
  }

  ExprPtr primary(int depth) {
    check_depth(depth);
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr(depth + 1);
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name(depth);
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && src_[start] == '.'))
      throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t e = pos_ + 1;
      if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
      std::size_t d = e;
      while (d < src_.size() && std::isdigit(static_cast<unsigned char>(src_[d]))) ++d;
      if (d > e) pos_ = d;  // otherwise the 'e' belongs to a following token
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc{} || ptr != src_.data() + pos_)
      throw ParseError("malformed number", start);
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Constant;
    n->number = value;
    return n;
  }

  ExprPtr name(int depth) {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '_'))
      ++pos_;
    const std::string_view id = src_.substr(start, pos_ - start);
    if (peek() == '(') {
      const int arity = detail::call_arity(id);
      if (arity < 0) throw ParseError("unknown function '" + std::string(id) + "'", start);
      ++pos_;  // '('
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::Call;
      n->name = std::string(id);
      n->children.push_back(expr(depth + 1));
      while (eat(',')) n->children.push_back(expr(depth + 1));
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      if (static_cast<int>(n->children.size()) != arity)
        throw ParseError("function '" + std::string(id) + "' takes " + std::to_string(arity) +
                             " argument(s), got " + std::to_string(n->children.size()),
                         start);
      return n;
    }
    if (vars_.find(id) == vars_.end())
      throw ParseError("unknown identifier '" + std::string(id) + "'", start);
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Variable;
    n->name = std::string(id);
    return n;
  }

  ExprPtr binary(char op, ExprPtr lhs, ExprPtr rhs) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Binary;
    n->op = op;
    n->children.push_back(std::move(lhs));
    n->children.push_back(std::move(rhs));
    return n;
  }

  std::string_view src_;
  const std::set<std::string, std::less<>>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses src over the given variable names. Throws ParseError (with byte
/// offset) on any syntax problem or unknown identifier.
inline ExprPtr parse_expr(std::string_view src, const std::set<std::string, std::less<>>& vars) {
  return detail::ExprParser(src, vars).parse();
}

/// Evaluates a parsed tree; var values are looked up by name, so only the
/// names that actually occur need meaningful values.
inline double eval_expr(const ExprNode& node, double t, double x) {
  switch (node.kind) {
    case ExprNode::Kind::Constant: return node.number;
    case ExprNode::Kind::Variable: return node.name == "t" ? t : x;
    case ExprNode::Kind::Unary: return -eval_expr(*node.children[0], t, x);
    case ExprNode::Kind::Binary: {
      const double l = eval_expr(*node.children[0], t, x);
      const double r = eval_expr(*node.children[1], t, x);
      switch (node.op) {
        case '+': return l + r;
        case '-': return l - r;
        case '*': return l * r;
        case '/': return l / r;
        case '^': return std::pow(l, r);
      }
      throw std::logic_error("eval_expr: unknown binary op");
    }
    case ExprNode::Kind::Call: {
      const double a0 = eval_expr(*node.children[0], t, x);
      if (node.name == "exp") return std::exp(a0);
      if (node.name == "sqrt") return std::sqrt(a0);
      if (node.name == "sin") return std::sin(a0);
      if (node.name == "cos") return std::cos(a0);
      if (node.name == "abs") return std::abs(a0);
      if (node.name == "pow") return std::pow(a0, eval_expr(*node.children[1], t, x));
      throw std::logic_error("eval_expr: unknown function '" + node.name + "'");
    }
  }
  throw std::logic_error("eval_expr: unknown node kind");
}

/// Wraps a parsed tree as a ScalarFn of the requested arity (1: f(t), 2:
/// f(t, x)). The tree must only use variables available at that arity.
inline ScalarFn to_scalar_fn(ExprPtr tree, int arity) {
  if (!tree) throw std::invalid_argument("to_scalar_fn: null expression");
  if (arity == 1)
    return ScalarFn::of_t([tree](double t) { return eval_expr(*tree, t, 0.0); },
                          ScalarFn::Kind::Expression);
  if (arity == 2)
    return ScalarFn::of_tx([tree](double t, double x) { return eval_expr(*tree, t, x); },
                           ScalarFn::Kind::Expression);
  throw std::invalid_argument("to_scalar_fn: arity must be 1 or 2");
}

/// Convenience: parse over {t} or {t, x} and wrap in one step.
inline ScalarFn parse_fn(std::string_view src, int arity) {
  static const std::set<std::string, std::less<>> kT{"t"};
  static const std::set<std::string, std::less<>> kTX{"t", "x"};
  if (arity == 1) return to_scalar_fn(parse_expr(src, kT), 1);
  if (arity == 2) return to_scalar_fn(parse_expr(src, kTX), 2);
  throw std::invalid_argument("parse_fn: arity must be 1 or 2");
}

}  // namespace confract
