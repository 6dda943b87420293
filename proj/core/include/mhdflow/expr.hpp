#pragma once

#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mhdflow {

enum class UnaryOp { neg, sin, cos, tan, sinh, cosh, tanh, exp, log, sqrt, atan };
enum class BinaryOp { add, sub, mul, div, pow, atan2 };

std::string_view name_of(UnaryOp op);
std::string_view name_of(BinaryOp op);

/// Name -> value table for expression evaluation. Small and linear; scenes
/// bind at most a handful of variables.
class Bindings {
 public:
  Bindings() = default;
  Bindings(std::initializer_list<std::pair<std::string_view, double>> init);

  Bindings& set(std::string_view name, double value);
  std::optional<double> find(std::string_view name) const;

 private:
  std::vector<std::pair<std::string, double>> slots_;
};

/// Immutable abstract syntax tree of a scalar function of named variables.
/// Copies share structure; evaluation is pure and safe from any thread.
class Expr {
 public:
  enum class Kind { constant, variable, unary, binary };

  /// The zero constant.
  Expr();

  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr unary(UnaryOp op, Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

  Kind kind() const;
  double value() const;            ///< constant nodes only
  const std::string& name() const; ///< variable nodes only
  UnaryOp unary_op() const;
  BinaryOp binary_op() const;
  const Expr& lhs() const;         ///< operand of a unary node, left child of a binary node
  const Expr& rhs() const;

  bool is_constant() const { return kind() == Kind::constant; }
  /// True when the subtree contains no variables.
  bool is_closed() const;
  bool depends_on(std::string_view var) const;
  /// Sorted, de-duplicated free variables.
  const std::vector<std::string>& variables() const;
  std::size_t node_count() const;

  /// Throws EvalError on an unbound variable or a domain violation (sqrt of
  /// a negative, log of a non-positive, division by zero, ...). The message
  /// names the offending subexpression.
  double eval(const Bindings& bindings) const;

  /// Infix text that parses back to an expression with identical values.
  std::string str() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Parses infix text: + - * / ^ (right-assoc, binds tighter than unary
/// minus), calls name(arg) / atan2(y, x), identifiers as variables,
/// `pi` and `e` as constants. Throws ParseError.
Expr parse(std::string_view text);

/// Exact symbolic derivative. Literal subtrees are folded and identities
/// with literal 0/1 operands are dropped; nothing else is simplified.
Expr differentiate(const Expr& e, std::string_view var);

inline std::string print(const Expr& e) { return e.str(); }

// Folding constructors, used when building derivative trees.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, const Expr& b);
Expr apply(UnaryOp op, const Expr& a);

}  // namespace mhdflow
