#include "mhdflow/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

#include "mhdflow/error.hpp"

namespace mhdflow {

std::string_view name_of(UnaryOp op) {
  switch (op) {
    case UnaryOp::neg: return "-";
    case UnaryOp::sin: return "sin";
    case UnaryOp::cos: return "cos";
    case UnaryOp::tan: return "tan";
    case UnaryOp::sinh: return "sinh";
    case UnaryOp::cosh: return "cosh";
    case UnaryOp::tanh: return "tanh";
    case UnaryOp::exp: return "exp";
    case UnaryOp::log: return "log";
    case UnaryOp::sqrt: return "sqrt";
    case UnaryOp::atan: return "atan";
  }
  return "?";
}

std::string_view name_of(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::pow: return "^";
    case BinaryOp::atan2: return "atan2";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Bindings

Bindings::Bindings(std::initializer_list<std::pair<std::string_view, double>> init) {
  for (const auto& [name, value] : init) set(name, value);
}

Bindings& Bindings::set(std::string_view name, double value) {
  for (auto& slot : slots_) {
    if (slot.first == name) {
      slot.second = value;
      return *this;
    }
  }
  slots_.emplace_back(std::string(name), value);
  return *this;
}

std::optional<double> Bindings::find(std::string_view name) const {
  for (const auto& slot : slots_)
    if (slot.first == name) return slot.second;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Nodes

struct Expr::Node {
  Kind kind = Kind::constant;
  double value = 0.0;
  std::string name;
  UnaryOp uop = UnaryOp::neg;
  BinaryOp bop = BinaryOp::add;
  // Leaf nodes hold empty children; Expr() itself allocates a node.
  Expr a{std::shared_ptr<const Node>()};
  Expr b{std::shared_ptr<const Node>()};
  std::vector<std::string> vars;
  std::size_t count = 1;
};

namespace {

std::vector<std::string> merge_vars(const std::vector<std::string>& x, const std::vector<std::string>& y) {
  std::vector<std::string> out;
  out.reserve(x.size() + y.size());
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr::Expr() {
  static const auto zero = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->value = 0.0;
    return std::shared_ptr<const Node>(std::move(n));
  }();
  node_ = zero;
}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->vars = {name};
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::unary;
  n->uop = op;
  n->vars = operand.variables();
  n->count = 1 + operand.node_count();
  n->a = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::binary;
  n->bop = op;
  n->vars = merge_vars(lhs.variables(), rhs.variables());
  n->count = 1 + lhs.node_count() + rhs.node_count();
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
UnaryOp Expr::unary_op() const { return node_->uop; }
BinaryOp Expr::binary_op() const { return node_->bop; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }
bool Expr::is_closed() const { return node_->vars.empty(); }
const std::vector<std::string>& Expr::variables() const { return node_->vars; }
std::size_t Expr::node_count() const { return node_->count; }

bool Expr::depends_on(std::string_view var) const {
  const auto& v = node_->vars;
  return std::binary_search(v.begin(), v.end(), var, std::less<>{});
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_violation(const std::string& what, double arg, const Expr& where) {
  throw EvalError(what + " (argument " + std::to_string(arg) + ") in '" + where.str() + "'");
}

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

}  // namespace

double Expr::eval(const Bindings& bindings) const {
  const Node& n = *node_;
  double result = 0.0;
  switch (n.kind) {
    case Kind::constant:
      return n.value;
    case Kind::variable: {
      const auto v = bindings.find(n.name);
      if (!v) throw EvalError("unbound variable '" + n.name + "'");
      return *v;
    }
    case Kind::unary: {
      const double x = n.a.eval(bindings);
      switch (n.uop) {
        case UnaryOp::neg: result = -x; break;
        case UnaryOp::sin: result = std::sin(x); break;
        case UnaryOp::cos: result = std::cos(x); break;
        case UnaryOp::tan: result = std::tan(x); break;
        case UnaryOp::sinh: result = std::sinh(x); break;
        case UnaryOp::cosh: result = std::cosh(x); break;
        case UnaryOp::tanh: result = std::tanh(x); break;
        case UnaryOp::exp: result = std::exp(x); break;
        case UnaryOp::atan: result = std::atan(x); break;
        case UnaryOp::log:
          if (!(x > 0.0)) domain_violation("log of non-positive value", x, *this);
          result = std::log(x);
          break;
        case UnaryOp::sqrt:
          if (!(x >= 0.0)) domain_violation("sqrt of negative value", x, *this);
          result = std::sqrt(x);
          break;
      }
      break;
    }
    case Kind::binary: {
      const double x = n.a.eval(bindings);
      const double y = n.b.eval(bindings);
      switch (n.bop) {
        case BinaryOp::add: result = x + y; break;
        case BinaryOp::sub: result = x - y; break;
        case BinaryOp::mul: result = x * y; break;
        case BinaryOp::div:
          if (y == 0.0) domain_violation("division by zero", y, *this);
          result = x / y;
          break;
        case BinaryOp::pow:
          if (n.b.is_closed()) {
            if (x < 0.0 && !is_integer(y)) domain_violation("negative base with non-integer exponent", x, *this);
            if (x == 0.0 && y < 0.0) domain_violation("zero base with negative exponent", x, *this);
          } else if (!(x > 0.0)) {
            domain_violation("non-positive base with variable exponent", x, *this);
          }
          result = std::pow(x, y);
          break;
        case BinaryOp::atan2: result = std::atan2(x, y); break;
      }
      break;
    }
  }
  if (!std::isfinite(result)) throw EvalError("non-finite result in '" + str() + "'");
  return result;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength; larger binds tighter.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::constant: return (e.value() < 0.0 || std::signbit(e.value())) ? 3 : 5;
    case Expr::Kind::variable: return 5;
    case Expr::Kind::unary: return e.unary_op() == UnaryOp::neg ? 3 : 5;
    case Expr::Kind::binary:
      switch (e.binary_op()) {
        case BinaryOp::add:
        case BinaryOp::sub: return 1;
        case BinaryOp::mul:
        case BinaryOp::div: return 2;
        case BinaryOp::pow: return 4;
        case BinaryOp::atan2: return 5;
      }
  }
  return 5;
}

std::string number_text(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void print_into(const Expr& e, std::string& out);

void print_child(const Expr& child, bool parenthesize, std::string& out) {
  if (parenthesize) out += '(';
  print_into(child, out);
  if (parenthesize) out += ')';
}

void print_into(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::constant:
      out += number_text(e.value());
      return;
    case Expr::Kind::variable:
      out += e.name();
      return;
    case Expr::Kind::unary:
      if (e.unary_op() == UnaryOp::neg) {
        out += '-';
        print_child(e.lhs(), precedence(e.lhs()) < 3, out);
      } else {
        out += name_of(e.unary_op());
        print_child(e.lhs(), true, out);
      }
      return;
    case Expr::Kind::binary: {
      const BinaryOp op = e.binary_op();
      if (op == BinaryOp::atan2) {
        out += "atan2(";
        print_into(e.lhs(), out);
        out += ", ";
        print_into(e.rhs(), out);
        out += ')';
        return;
      }
      const int p = precedence(e);
      if (op == BinaryOp::pow) {
        // Right-associative: parenthesize a power on the left, not on the right.
        print_child(e.lhs(), precedence(e.lhs()) <= p, out);
        out += '^';
        print_child(e.rhs(), precedence(e.rhs()) < p, out);
        return;
      }
      // Left-associative: an equal-precedence right child keeps its parentheses
      // so the reparsed tree is the same tree.
      print_child(e.lhs(), precedence(e.lhs()) < p, out);
      out += name_of(op);
      print_child(e.rhs(), precedence(e.rhs()) <= p, out);
      return;
    }
  }
}

}  // namespace

std::string Expr::str() const {
  std::string out;
  print_into(*this, out);
  return out;
}

// ---------------------------------------------------------------------------
// Folding constructors

namespace {

bool is_literal(const Expr& e, double v) { return e.is_constant() && e.value() == v; }

// Folds an all-literal node; leaves it alone when evaluation would fail so
// the error surfaces at eval time with context.
Expr try_fold(Expr raw) {
  try {
    return Expr::constant(raw.eval(Bindings{}));
  } catch (const EvalError&) {
    return raw;
  }
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return try_fold(Expr::binary(BinaryOp::add, a, b));
  if (is_literal(a, 0.0)) return b;
  if (is_literal(b, 0.0)) return a;
  return Expr::binary(BinaryOp::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return try_fold(Expr::binary(BinaryOp::sub, a, b));
  if (is_literal(b, 0.0)) return a;
  if (is_literal(a, 0.0)) return -b;
  return Expr::binary(BinaryOp::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return try_fold(Expr::binary(BinaryOp::mul, a, b));
  if (is_literal(a, 0.0) || is_literal(b, 0.0)) return Expr::constant(0.0);
  if (is_literal(a, 1.0)) return b;
  if (is_literal(b, 1.0)) return a;
  if (is_literal(a, -1.0)) return -b;
  if (is_literal(b, -1.0)) return -a;
  return Expr::binary(BinaryOp::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return try_fold(Expr::binary(BinaryOp::div, a, b));
  if (is_literal(a, 0.0)) return Expr::constant(0.0);
  if (is_literal(b, 1.0)) return a;
  return Expr::binary(BinaryOp::div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.kind() == Expr::Kind::unary && a.unary_op() == UnaryOp::neg) return a.lhs();
  return Expr::unary(UnaryOp::neg, a);
}

Expr pow(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return try_fold(Expr::binary(BinaryOp::pow, a, b));
  if (is_literal(b, 1.0)) return a;
  if (is_literal(b, 0.0)) return Expr::constant(1.0);
  return Expr::binary(BinaryOp::pow, a, b);
}

Expr apply(UnaryOp op, const Expr& a) {
  if (op == UnaryOp::neg) return -a;
  if (a.is_constant()) return try_fold(Expr::unary(op, a));
  return Expr::unary(op, a);
}

}  // namespace mhdflow
