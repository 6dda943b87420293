#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "mhdflow/expr.hpp"

namespace mhdflow {

/// Value, gradient and Hessian of a scalar function of N arguments.
template <std::size_t N>
struct Jet {
  double value = 0.0;
  std::array<double, N> d1{};
  std::array<std::array<double, N>, N> d2{};
};

/// An expression of N named arguments with its first and second symbolic
/// partials precomputed. Second partials are taken in both orders so mixed
/// symmetry can be checked rather than assumed.
template <std::size_t N>
class SmoothFunction {
 public:
  SmoothFunction() = default;
  /// Throws ConstructionError if `e` uses a variable outside `names`.
  SmoothFunction(Expr e, std::array<std::string, N> names);

  Jet<N> jet(const std::array<double, N>& args) const;
  double operator()(const std::array<double, N>& args) const;

  const Expr& expr() const { return f_; }
  const std::array<std::string, N>& names() const { return names_; }

 private:
  Bindings bind(const std::array<double, N>& args) const;

  Expr f_;
  std::array<std::string, N> names_{};
  std::array<Expr, N> d1_{};
  std::array<std::array<Expr, N>, N> d2_{};
};

extern template class SmoothFunction<1>;
extern template class SmoothFunction<2>;
extern template class SmoothFunction<3>;

/// A function of a single argument whose name is inferred: the unique free
/// variable of the expression (any name), or none for a constant.
class UnivariateFunction {
 public:
  UnivariateFunction() = default;
  /// Throws ConstructionError when the expression has two or more free variables.
  explicit UnivariateFunction(Expr e);

  Jet<1> jet(double u) const { return fn_.jet({u}); }
  double operator()(double u) const { return fn_({u}); }
  const Expr& expr() const { return fn_.expr(); }
  const std::string& argument() const { return fn_.names()[0]; }

 private:
  SmoothFunction<1> fn_;
};

}  // namespace mhdflow
