#include <doctest.h>

#include <cmath>

#include "mhdflow/error.hpp"
#include "mhdflow/expr.hpp"
#include "mhdflow/function.hpp"
#include "support.hpp"

using namespace mhdflow;
using testing::pi;

namespace {

double at(const std::string& text, Bindings b) { return parse(text).eval(b); }

}  // namespace

TEST_CASE("parse builds the expected trees") {
  const Expr e = parse("sin(k1)");
  CHECK(e.kind() == Expr::Kind::unary);
  CHECK(e.unary_op() == UnaryOp::sin);
  CHECK(e.lhs().kind() == Expr::Kind::variable);
  CHECK(e.lhs().name() == "k1");

  const Expr tau2 = parse("sqrt(2*k3)*sin(k2)");
  CHECK(tau2.binary_op() == BinaryOp::mul);
  CHECK(tau2.variables() == std::vector<std::string>{"k2", "k3"});

  CHECK(parse("atan2(y, x)").binary_op() == BinaryOp::atan2);
  CHECK(parse("pi").eval({}) == pi);
  CHECK(parse("e").eval({}) == std::exp(1.0));
}

TEST_CASE("operator precedence and associativity") {
  CHECK(at("2^3^2", {}) == 512.0);
  CHECK(at("-2^2", {}) == -4.0);
  CHECK(at("2*3+4*5", {}) == 26.0);
  CHECK(at("10-4-3", {}) == 3.0);
  CHECK(at("64/4/2", {}) == 8.0);
  CHECK(at("2^-1", {}) == 0.5);
  CHECK(at("(1+2)*3", {}) == 9.0);
  CHECK(at("--3", {}) == 3.0);
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse("sin(");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("1 +"), ParseError);
  CHECK_THROWS_AS(parse("(k1"), ParseError);
  CHECK_THROWS_AS(parse("k1 k2"), ParseError);
  CHECK_THROWS_AS(parse("atan2(1)"), ParseError);
  try {
    parse("2 * frob(k1)");
    FAIL("expected an unknown-function error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
    CHECK(std::string(e.what()).find("frob") != std::string::npos);
  }
}

TEST_CASE("evaluation") {
  CHECK(at("sin(k1)", {{"k1", 0.0}}) == 0.0);
  CHECK(at("sqrt(2*k3)*sin(k2)", {{"k3", 0.5}, {"k2", pi / 6}}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(at("atan2(1, -1)", {}) == doctest::Approx(3 * pi / 4).epsilon(1e-15));
  CHECK(at("(-2)^3", {}) == -8.0);
}

TEST_CASE("evaluation errors name the subexpression") {
  try {
    at("1 + sqrt(k3)", {{"k3", -1.0}});
    FAIL("expected a domain error");
  } catch (const EvalError& e) {
    CHECK(std::string(e.what()).find("sqrt(k3)") != std::string::npos);
  }
  CHECK_THROWS_AS(at("log(x)", {{"x", 0.0}}), EvalError);
  CHECK_THROWS_AS(at("1/x", {{"x", 0.0}}), EvalError);
  CHECK_THROWS_AS(at("x + y", {{"x", 1.0}}), EvalError);
  CHECK_THROWS_AS(at("(-2)^0.5", {}), EvalError);
  CHECK_THROWS_AS(at("x^y", {{"x", -1.0}, {"y", 2.0}}), EvalError);
}

TEST_CASE("differentiation of basic forms") {
  CHECK(differentiate(parse("sin(k1)"), "k1").str() == "cos(k1)");
  const Expr d7 = differentiate(parse("7"), "k1");
  CHECK(d7.is_constant());
  CHECK(d7.value() == 0.0);
  CHECK(differentiate(parse("k2*k3"), "k1").str() == "0");

  // The potential of the circular map has d/dt2 = sqrt(2 k3 - t2^2).
  const Expr phi = parse("0.5*t2*sqrt(2*k3-t2^2)+k3*atan(t2/sqrt(2*k3-t2^2))");
  const Expr dphi = differentiate(phi, "t2");
  testing::ExprGenerator g(7);
  for (int i = 0; i < 100; ++i) {
    const double k3 = g.uniform(0.1, 2.0);
    const double t2 = g.uniform(-0.95, 0.95) * std::sqrt(2 * k3);
    CHECK(dphi.eval({{"k3", k3}, {"t2", t2}}) == doctest::Approx(std::sqrt(2 * k3 - t2 * t2)).epsilon(1e-12));
  }
  CHECK(dphi.eval({{"k3", 0.5}, {"t2", 0.3}}) == doctest::Approx(std::sqrt(1.0 - 0.09)).epsilon(1e-14));
}

TEST_CASE("derivatives of every built-in match central differences") {
  const char* forms[] = {"-x",      "sin(x)",  "cos(x)",  "tan(x)",       "sinh(x)",     "cosh(x)",
                         "tanh(x)", "exp(x)",  "log(x)",  "sqrt(x)",      "atan(x)",     "x + y",
                         "x - y",   "x * y",   "x / y",   "x ^ 3",        "x ^ y",       "atan2(y, x)",
                         "2 ^ x",   "x ^ 0.5", "y / x^2", "exp(sin(x*y))"};
  const double h = 1e-5;
  for (const char* f : forms) {
    CAPTURE(f);
    const Expr e = parse(f);
    const Expr dx = differentiate(e, "x");
    for (double x : {0.3, 0.7, 1.3}) {
      const double y = 0.9;
      const double fd = (e.eval({{"x", x + h}, {"y", y}}) - e.eval({{"x", x - h}, {"y", y}})) / (2 * h);
      const double d = dx.eval({{"x", x}, {"y", y}});
      CHECK(std::fabs(d - fd) < 1e-7 * (1 + std::fabs(d)));
    }
  }
}

namespace {

/// A random tree with a sample point where it, its gradient and its
/// Hessian are finite and moderate, so central differences are meaningful.
struct Sample {
  Expr e;
  double x, y;
};

bool tame(const Expr& e, double x, double y, double h) {
  try {
    for (double dx : {-h, 0.0, h})
      for (double dy : {-h, 0.0, h}) {
        const Bindings b{{"x", x + dx}, {"y", y + dy}};
        if (std::fabs(e.eval(b)) > 1e3) return false;
        for (const char* u : {"x", "y"}) {
          const Expr d = differentiate(e, u);
          if (std::fabs(d.eval(b)) > 1e3) return false;
          for (const char* w : {"x", "y"})
            if (std::fabs(differentiate(d, w).eval(b)) > 1e3) return false;
        }
      }
  } catch (const EvalError&) {
    return false;
  }
  return true;
}

std::vector<Sample> random_corpus(std::uint64_t seed, std::size_t n) {
  testing::ExprGenerator g(seed);
  std::vector<Sample> out;
  while (out.size() < n) {
    const Expr e = g(4);
    const double x = g.uniform(-2.0, 2.0), y = g.uniform(-2.0, 2.0);
    if (tame(e, x, y, 1e-4)) out.push_back({e, x, y});
  }
  return out;
}

}  // namespace

TEST_CASE("random trees: derivative vs central difference, Schwarz symmetry, print round trip") {
  const auto corpus = random_corpus(20240917, 1000);
  const double h = 1e-5;
  int fd_fail = 0, schwarz_fail = 0, roundtrip_fail = 0;
  for (const auto& s : corpus) {
    const Bindings b{{"x", s.x}, {"y", s.y}};
    for (const char* u : {"x", "y"}) {
      const Expr d = differentiate(s.e, u);
      Bindings bp = b, bm = b;
      const double base = std::string(u) == "x" ? s.x : s.y;
      bp.set(u, base + h);
      bm.set(u, base - h);
      const double fd = (s.e.eval(bp) - s.e.eval(bm)) / (2 * h);
      const double an = d.eval(b);
      if (!(std::fabs(an - fd) < 1e-7 * (1 + std::fabs(an)))) {
        ++fd_fail;
        MESSAGE("fd mismatch for ", s.e.str(), " d/", u, ": ", an, " vs ", fd);
      }
    }
    const double xy = differentiate(differentiate(s.e, "x"), "y").eval(b);
    const double yx = differentiate(differentiate(s.e, "y"), "x").eval(b);
    if (!(std::fabs(xy - yx) <= 1e-12 * std::fmax(1.0, std::fabs(xy)))) {
      ++schwarz_fail;
      MESSAGE("Schwarz asymmetry for ", s.e.str(), ": ", xy, " vs ", yx);
    }
    const Expr back = parse(s.e.str());
    if (back.eval(b) != s.e.eval(b)) {
      ++roundtrip_fail;
      MESSAGE("round trip changed ", s.e.str(), " -> ", back.str());
    }
  }
  CHECK(fd_fail == 0);
  CHECK(schwarz_fail == 0);
  CHECK(roundtrip_fail == 0);
}

TEST_CASE("evaluation is deterministic") {
  const auto corpus = random_corpus(99, 200);
  for (const auto& s : corpus) {
    const Bindings b{{"x", s.x}, {"y", s.y}};
    const double first = s.e.eval(b);
    CHECK(s.e.eval(b) == first);
    CHECK(parse(s.e.str()).eval(b) == parse(s.e.str()).eval(b));
  }
}

TEST_CASE("smooth functions precompute gradients and Hessians") {
  const SmoothFunction<2> f(parse("k2^2*k3 + sin(k3)"), {"k2", "k3"});
  const Jet<2> j = f.jet({1.5, 0.25});
  CHECK(j.value == doctest::Approx(2.25 * 0.25 + std::sin(0.25)));
  CHECK(j.d1[0] == doctest::Approx(2 * 1.5 * 0.25));
  CHECK(j.d1[1] == doctest::Approx(2.25 + std::cos(0.25)));
  CHECK(j.d2[0][1] == doctest::Approx(3.0));
  CHECK(j.d2[1][0] == doctest::Approx(3.0));
  CHECK(j.d2[1][1] == doctest::Approx(-std::sin(0.25)));
  CHECK_THROWS_AS(SmoothFunction<1>(parse("k1 + k2"), {"k1"}), ConstructionError);

  const UnivariateFunction g(parse("cos(2*t3)"));
  CHECK(g.argument() == "t3");
  CHECK(g.jet(0.3).d1[0] == doctest::Approx(-2 * std::sin(0.6)));
  CHECK_THROWS_AS(UnivariateFunction(parse("a*b")), ConstructionError);
  CHECK(UnivariateFunction(parse("0")).jet(5.0).d1[0] == 0.0);
}
