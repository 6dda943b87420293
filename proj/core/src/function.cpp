#include "mhdflow/function.hpp"

#include "mhdflow/error.hpp"

namespace mhdflow {

template <std::size_t N>
SmoothFunction<N>::SmoothFunction(Expr e, std::array<std::string, N> names)
    : f_(std::move(e)), names_(std::move(names)) {
  for (const auto& v : f_.variables()) {
    bool known = false;
    for (const auto& n : names_) known = known || n == v;
    if (!known) throw ConstructionError("expression '" + f_.str() + "' uses unexpected variable '" + v + "'");
  }
  for (std::size_t i = 0; i < N; ++i) {
    d1_[i] = differentiate(f_, names_[i]);
    for (std::size_t j = 0; j < N; ++j) d2_[i][j] = differentiate(d1_[i], names_[j]);
  }
}

template <std::size_t N>
Bindings SmoothFunction<N>::bind(const std::array<double, N>& args) const {
  Bindings b;
  for (std::size_t i = 0; i < N; ++i) b.set(names_[i], args[i]);
  return b;
}

template <std::size_t N>
Jet<N> SmoothFunction<N>::jet(const std::array<double, N>& args) const {
  const Bindings b = bind(args);
  Jet<N> out;
  out.value = f_.eval(b);
  for (std::size_t i = 0; i < N; ++i) {
    out.d1[i] = d1_[i].eval(b);
    for (std::size_t j = 0; j < N; ++j) out.d2[i][j] = d2_[i][j].eval(b);
  }
  return out;
}

template <std::size_t N>
double SmoothFunction<N>::operator()(const std::array<double, N>& args) const {
  return f_.eval(bind(args));
}

template class SmoothFunction<1>;
template class SmoothFunction<2>;
template class SmoothFunction<3>;

namespace {

std::string sole_variable(const Expr& e) {
  const auto& vars = e.variables();
  if (vars.size() > 1)
    throw ConstructionError("expected a function of one variable, got '" + e.str() + "' with " +
                            std::to_string(vars.size()) + " free variables");
  return vars.empty() ? std::string("u") : vars.front();
}

}  // namespace

UnivariateFunction::UnivariateFunction(Expr e) : fn_(e, {sole_variable(e)}) {}

}  // namespace mhdflow
