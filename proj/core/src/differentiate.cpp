#include "mhdflow/expr.hpp"

namespace mhdflow {
namespace {

Expr lit(double v) { return Expr::constant(v); }

Expr square(const Expr& e) { return pow(e, lit(2.0)); }

}  // namespace

Expr differentiate(const Expr& e, std::string_view var) {
  if (!e.depends_on(var)) return lit(0.0);

  switch (e.kind()) {
    case Expr::Kind::constant:
      return lit(0.0);
    case Expr::Kind::variable:
      return lit(e.name() == var ? 1.0 : 0.0);

    case Expr::Kind::unary: {
      const Expr& a = e.lhs();
      const Expr da = differentiate(a, var);
      switch (e.unary_op()) {
        case UnaryOp::neg: return -da;
        case UnaryOp::sin: return apply(UnaryOp::cos, a) * da;
        case UnaryOp::cos: return -apply(UnaryOp::sin, a) * da;
        case UnaryOp::tan: return da / square(apply(UnaryOp::cos, a));
        case UnaryOp::sinh: return apply(UnaryOp::cosh, a) * da;
        case UnaryOp::cosh: return apply(UnaryOp::sinh, a) * da;
        case UnaryOp::tanh: return (lit(1.0) - square(apply(UnaryOp::tanh, a))) * da;
        case UnaryOp::exp: return e * da;
        case UnaryOp::log: return da / a;
        case UnaryOp::sqrt: return da / (lit(2.0) * e);
        case UnaryOp::atan: return da / (lit(1.0) + square(a));
      }
      break;
    }

    case Expr::Kind::binary: {
      const Expr& a = e.lhs();
      const Expr& b = e.rhs();
      const Expr da = differentiate(a, var);
      const Expr db = differentiate(b, var);
      switch (e.binary_op()) {
        case BinaryOp::add: return da + db;
        case BinaryOp::sub: return da - db;
        case BinaryOp::mul: return da * b + a * db;
        case BinaryOp::div: return (da * b - a * db) / square(b);
        case BinaryOp::pow:
          if (b.is_closed()) return b * pow(a, b - lit(1.0)) * da;
          // a^b = exp(b log a); the base must stay positive.
          return e * (db * apply(UnaryOp::log, a) + b * da / a);
        case BinaryOp::atan2:
          // d atan2(y, x) = (x dy - y dx) / (x^2 + y^2)
          return (b * da - a * db) / (square(b) + square(a));
      }
      break;
    }
  }
  return lit(0.0);
}

}  // namespace mhdflow
