#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "mhdflow/domain.hpp"
#include "mhdflow/expr.hpp"
#include "mhdflow/linalg.hpp"

namespace testing {

inline constexpr double pi = std::numbers::pi;

inline std::filesystem::path scene_path(const std::string& name) {
  return std::filesystem::path(MHDFLOW_SCENES_DIR) / name;
}

inline mhdflow::KBox box(double a0, double a1, double b0, double b1, double c0, double c1) {
  mhdflow::KBox k;
  k[0] = {a0, a1};
  k[1] = {b0, b1};
  k[2] = {c0, c1};
  return k;
}

inline mhdflow::PlaneBox plane(double b0, double b1, double c0, double c1) {
  return mhdflow::PlaneBox{{b0, b1}, {c0, c1}};
}

inline double dist(const mhdflow::Vec3& a, const mhdflow::Vec3& b) { return mhdflow::norm(a - b); }

/// Uniform point inside a box, away from the walls by `margin`.
inline mhdflow::KPoint random_point(std::mt19937_64& rng, const mhdflow::KBox& b, double margin = 0.0) {
  mhdflow::KPoint p;
  for (std::size_t i = 0; i < 3; ++i) {
    std::uniform_real_distribution<double> u(b[i].lo + margin, b[i].hi - margin);
    p[i] = u(rng);
  }
  return p;
}

/// Random expression trees over the variables x and y.
class ExprGenerator {
 public:
  explicit ExprGenerator(std::uint64_t seed) : rng_(seed) {}

  mhdflow::Expr operator()(int depth) {
    using mhdflow::Expr;
    std::uniform_int_distribution<int> pick(0, 9);
    const int r = depth <= 0 ? pick(rng_) % 3 : pick(rng_);
    if (r == 0) return Expr::constant(std::round(uniform(-3.0, 3.0) * 4.0) / 4.0);
    if (r <= 2) return Expr::variable(coin() ? "x" : "y");
    if (r <= 5) {
      static constexpr mhdflow::UnaryOp ops[] = {
          mhdflow::UnaryOp::neg, mhdflow::UnaryOp::sin,  mhdflow::UnaryOp::cos,  mhdflow::UnaryOp::tan,
          mhdflow::UnaryOp::sinh, mhdflow::UnaryOp::cosh, mhdflow::UnaryOp::tanh, mhdflow::UnaryOp::exp,
          mhdflow::UnaryOp::log, mhdflow::UnaryOp::sqrt, mhdflow::UnaryOp::atan};
      std::uniform_int_distribution<int> op(0, 10);
      return Expr::unary(ops[op(rng_)], (*this)(depth - 1));
    }
    static constexpr mhdflow::BinaryOp ops[] = {mhdflow::BinaryOp::add, mhdflow::BinaryOp::sub,
                                                mhdflow::BinaryOp::mul, mhdflow::BinaryOp::div,
                                                mhdflow::BinaryOp::pow, mhdflow::BinaryOp::atan2};
    std::uniform_int_distribution<int> op(0, 5);
    const auto o = ops[op(rng_)];
    if (o == mhdflow::BinaryOp::pow && coin())
      return Expr::binary(o, (*this)(depth - 1), Expr::constant(static_cast<double>(1 + pick(rng_) % 3)));
    return Expr::binary(o, (*this)(depth - 1), (*this)(depth - 1));
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing
