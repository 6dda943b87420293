#include "mhdflow/areamap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "mhdflow/error.hpp"
#include "mhdflow/function.hpp"

namespace mhdflow {

std::string_view name_of(AreaMapMode mode) {
  switch (mode) {
    case AreaMapMode::pair: return "pair";
    case AreaMapMode::potential: return "potential";
    case AreaMapMode::circular: return "circular";
  }
  return "?";
}

namespace {

std::string point_text(double k2, double k3) {
  std::ostringstream os;
  os.precision(10);
  os << "(k2=" << k2 << ", k3=" << k3 << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

class PairImpl final : public detail::AreaMapImpl {
 public:
  PairImpl(const Expr& t2, const Expr& t3) : t2_(t2, {"k2", "k3"}), t3_(t3, {"k2", "k3"}) {}

  PlanarJet jet(double k2, double k3) const override {
    PlanarJet out;
    const SmoothFunction<2>* comps[2] = {&t2_, &t3_};
    for (std::size_t c = 0; c < 2; ++c) {
      const Jet<2> j = comps[c]->jet({k2, k3});
      out.value[c] = j.value;
      out.d1[c] = j.d1;
      out.d2[c] = j.d2;
    }
    return out;
  }

 private:
  SmoothFunction<2> t2_, t3_;
};

// ---------------------------------------------------------------------------

class CircularImpl final : public detail::AreaMapImpl {
 public:
  PlanarJet jet(double k2, double k3) const override {
    if (!(k3 > 0.0)) throw EvalError("circular map needs k3 > 0, got k3 = " + std::to_string(k3));
    // r = sqrt(2 k3), r' = 1/r, r'' = -1/r^3
    const double r = std::sqrt(2.0 * k3);
    const double s = std::sin(k2);
    const double c = std::cos(k2);
    const double r3 = r * r * r;
    PlanarJet out;
    out.value = {r * s, r * c};
    out.d1[0] = {r * c, s / r};
    out.d1[1] = {-r * s, c / r};
    out.d2[0][0] = {-r * s, c / r};
    out.d2[0][1] = {c / r, -s / r3};
    out.d2[1][0] = {-r * c, -s / r};
    out.d2[1][1] = {-s / r, -c / r3};
    return out;
  }
};

// ---------------------------------------------------------------------------
// Implicit map from a potential Phi(k3, t2):
//   K = Phi_k3, T = Phi_t2, k2 = K(k3, tau2), tau3 = T(k3, tau2).
// tau2 comes from Newton on K(k3, u) = k2, seeded from a table built by grid
// continuation at construction. Partials follow from differentiating the
// identities k2 = K(k3, tau2(k2, k3)), tau3 = T(k3, tau2(k2, k3)).

class PotentialImpl final : public detail::AreaMapImpl {
 public:
  PotentialImpl(const Expr& phi, const PlaneBox& box, const NewtonSettings& settings)
      : box_(box), settings_(settings) {
    for (const auto& v : phi.variables())
      if (v != "k3" && v != "t2")
        throw ConstructionError("potential must be a function of k3 and t2, found variable '" + v + "'");
    K_ = differentiate(phi, "k3");
    T_ = differentiate(phi, "t2");
    Kt_ = differentiate(K_, "t2");
    K3_ = differentiate(K_, "k3");
    Tt_ = differentiate(T_, "t2");
    T3_ = differentiate(T_, "k3");
    Ktt_ = differentiate(Kt_, "t2");
    Kt3_ = differentiate(Kt_, "k3");
    K33_ = differentiate(K3_, "k3");
    Ttt_ = differentiate(Tt_, "t2");
    Tt3_ = differentiate(Tt_, "k3");
    T33_ = differentiate(T3_, "k3");
    build_seed_table();
  }

  PlanarJet jet(double k2, double k3) const override {
    const double u = solve(k2, k3).tau2;
    const Bindings b{{"k3", k3}, {"t2", u}};
    const double Kt = Kt_.eval(b);
    if (std::fabs(Kt) < kDegenerate) throw degenerate(k2, k3, Kt);
    const double K3 = K3_.eval(b), Tt = Tt_.eval(b), T3 = T3_.eval(b);
    const double Ktt = Ktt_.eval(b), Kt3 = Kt3_.eval(b), K33 = K33_.eval(b);
    const double Ttt = Ttt_.eval(b), Tt3 = Tt3_.eval(b), T33 = T33_.eval(b);

    const double u2 = 1.0 / Kt;
    const double u3 = -K3 / Kt;
    const double u22 = -Ktt * u2 * u2 / Kt;
    const double u23 = -(Ktt * u2 * u3 + Kt3 * u2) / Kt;
    const double u33 = -(K33 + 2.0 * Kt3 * u3 + Ktt * u3 * u3) / Kt;

    PlanarJet out;
    out.value = {u, T_.eval(b)};
    out.d1[0] = {u2, u3};
    out.d1[1] = {Tt * u2, T3 + Tt * u3};
    out.d2[0][0] = {u22, u23};
    out.d2[0][1] = {u23, u33};
    const double v22 = Ttt * u2 * u2 + Tt * u22;
    const double v23 = (Tt3 + Ttt * u3) * u2 + Tt * u23;
    const double v33 = T33 + 2.0 * Tt3 * u3 + Ttt * u3 * u3 + Tt * u33;
    out.d2[1][0] = {v22, v23};
    out.d2[1][1] = {v23, v33};
    return out;
  }

  HodographRoot solve(double k2, double k3) const {
    const std::size_t i = nearest(box_.k3, k3, n3_);
    const std::size_t j = nearest(box_.k2, k2, n2_);
    const double seed = roots_[i * n2_ + j];
    if (auto r = newton(k2, k3, seed)) return *r;
    if (auto r = continuation(box_.k2.node(j, n2_), box_.k3.node(i, n3_), seed, k2, k3, kMaxDepth)) return *r;
    if (auto r = bisection(k2, k3)) return *r;
    throw NumericalError("hodograph Newton solve did not converge at " + point_text(k2, k3));
  }

 private:
  static constexpr double kDegenerate = 1e-12;
  static constexpr int kMaxDepth = 12;

  static NumericalError degenerate(double k2, double k3, double Kt) {
    std::ostringstream os;
    os << "degenerate hodograph: |dK/dt2| = " << std::fabs(Kt) << " < 1e-12 at " << point_text(k2, k3);
    return NumericalError(os.str());
  }

  static std::size_t nearest(const Interval& iv, double v, std::size_t n) {
    if (n <= 1 || iv.width() <= 0.0) return 0;
    const double t = (v - iv.lo) / iv.width() * static_cast<double>(n - 1);
    const double clamped = std::clamp(std::round(t), 0.0, static_cast<double>(n - 1));
    return static_cast<std::size_t>(clamped);
  }

  double residual(double k2, double k3, double u) const {
    return K_.eval(Bindings{{"k3", k3}, {"t2", u}}) - k2;
  }

  // Damped Newton. nullopt on failure to converge or on leaving the domain
  // of Phi; a vanishing dK/dt2 is a hard error.
  std::optional<HodographRoot> newton(double k2, double k3, double seed) const {
    const double scale = std::max(1.0, std::fabs(k2));
    const double tol = settings_.tolerance * scale;
    double u = seed;
    double r = 0.0;
    try {
      r = residual(k2, k3, u);
    } catch (const EvalError&) {
      return std::nullopt;
    }
    for (int it = 0; it <= settings_.max_iterations; ++it) {
      if (std::fabs(r) <= tol) return HodographRoot{u, it};
      if (it == settings_.max_iterations) break;
      double Kt = 0.0;
      try {
        Kt = Kt_.eval(Bindings{{"k3", k3}, {"t2", u}});
      } catch (const EvalError&) {
        return std::nullopt;
      }
      if (std::fabs(Kt) < kDegenerate) throw degenerate(k2, k3, Kt);
      const double du = -r / Kt;
      bool accepted = false;
      double lambda = 1.0;
      for (int halving = 0; halving < 40 && !accepted; ++halving, lambda *= 0.5) {
        try {
          const double rn = residual(k2, k3, u + lambda * du);
          if (std::fabs(rn) < std::fabs(r)) {
            u += lambda * du;
            r = rn;
            accepted = true;
          }
        } catch (const EvalError&) {
        }
      }
      if (!accepted) {
        // Rounding floor: the full step is negligible and the residual is
        // within a few hundred ulps of the target.
        const bool negligible = std::fabs(du) <= 1e-14 * std::max(1.0, std::fabs(u));
        if (negligible && std::fabs(r) <= 1e3 * tol) return HodographRoot{u, it + 1};
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  // Newton along a straight path in (k2, k3), halving the step on failure.
  std::optional<HodographRoot> continuation(double k2a, double k3a, double ua, double k2b, double k3b,
                                            int depth) const {
    if (auto r = newton(k2b, k3b, ua)) return r;
    if (depth == 0) return std::nullopt;
    const double k2m = 0.5 * (k2a + k2b);
    const double k3m = 0.5 * (k3a + k3b);
    const auto mid = continuation(k2a, k3a, ua, k2m, k3m, depth - 1);
    if (!mid) return std::nullopt;
    return continuation(k2m, k3m, mid->tau2, k2b, k3b, depth - 1);
  }

  std::optional<HodographRoot> bisection(double k2, double k3) const {
    if (!settings_.bracket) return std::nullopt;
    double lo = (*settings_.bracket)[0];
    double hi = (*settings_.bracket)[1];
    const double tol = settings_.tolerance * std::max(1.0, std::fabs(k2));
    try {
      double flo = residual(k2, k3, lo);
      const double fhi = residual(k2, k3, hi);
      if (flo * fhi > 0.0) return std::nullopt;
      for (int it = 1; it <= 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = residual(k2, k3, mid);
        if (std::fabs(fm) <= tol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(mid))
          return HodographRoot{mid, it};
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
    } catch (const EvalError&) {
    }
    return std::nullopt;
  }

  // Grid continuation per k3 line: start where the seed is an exact root
  // (k2* = K(k3, seed)), then sweep k2 outward in both directions.
  void build_seed_table() {
    n2_ = std::max<std::size_t>(2, settings_.seed_nodes_k2);
    n3_ = std::max<std::size_t>(2, settings_.seed_nodes_k3);
    roots_.assign(n2_ * n3_, 0.0);
    const double seed0 = settings_.bracket ? 0.5 * ((*settings_.bracket)[0] + (*settings_.bracket)[1]) : 0.0;

    for (std::size_t i = 0; i < n3_; ++i) {
      const double k3 = box_.k3.node(i, n3_);
      double start = 0.0;
      try {
        start = K_.eval(Bindings{{"k3", k3}, {"t2", seed0}});
      } catch (const EvalError& e) {
        throw NumericalError("cannot start hodograph continuation at t2 = " + std::to_string(seed0) +
                             ", k3 = " + std::to_string(k3) + ": " + e.what() + " (supply a bracket)");
      }
      const std::size_t j0 = nearest(box_.k2, start, n2_);
      solve_node(i, j0, start, seed0);
      for (std::size_t j = j0 + 1; j < n2_; ++j) solve_node(i, j, box_.k2.node(j - 1, n2_), roots_[i * n2_ + j - 1]);
      for (std::size_t j = j0; j-- > 0;) solve_node(i, j, box_.k2.node(j + 1, n2_), roots_[i * n2_ + j + 1]);
    }
  }

  void solve_node(std::size_t i, std::size_t j, double from_k2, double from_u) {
    const double k3 = box_.k3.node(i, n3_);
    const double k2 = box_.k2.node(j, n2_);
    auto r = continuation(from_k2, k3, from_u, k2, k3, kMaxDepth);
    if (!r) r = bisection(k2, k3);
    if (!r) throw NumericalError("hodograph Newton solve did not converge at " + point_text(k2, k3));
    const double Kt = Kt_.eval(Bindings{{"k3", k3}, {"t2", r->tau2}});
    if (std::fabs(Kt) < kDegenerate) throw degenerate(k2, k3, Kt);
    roots_[i * n2_ + j] = r->tau2;
  }

  PlaneBox box_;
  NewtonSettings settings_;
  Expr K_, T_, Kt_, K3_, Tt_, T3_, Ktt_, Kt3_, K33_, Ttt_, Tt3_, T33_;
  std::size_t n2_ = 0, n3_ = 0;
  std::vector<double> roots_;  // [k3 node][k2 node]
};

// ---------------------------------------------------------------------------

class ShearImpl final : public detail::AreaMapImpl {
 public:
  ShearImpl(std::shared_ptr<const detail::AreaMapImpl> base, const Expr& g, ShearAxis axis)
      : base_(std::move(base)), g_(g), axis_(axis) {}

  PlanarJet jet(double k2, double k3) const override {
    PlanarJet out = base_->jet(k2, k3);
    // Shifted component m gets G(other component).
    const std::size_t m = axis_ == ShearAxis::tau2 ? 0 : 1;
    const std::size_t o = 1 - m;
    const Jet<1> g = g_.jet(out.value[o]);
    const double G1 = g.d1[0];
    const double G2 = g.d2[0][0];
    PlanarJet res = out;
    res.value[m] += g.value;
    for (std::size_t i = 0; i < 2; ++i) {
      res.d1[m][i] += G1 * out.d1[o][i];
      for (std::size_t j = 0; j < 2; ++j)
        res.d2[m][i][j] += G2 * out.d1[o][i] * out.d1[o][j] + G1 * out.d2[o][i][j];
    }
    return res;
  }

  const detail::AreaMapImpl* base() const { return base_.get(); }

 private:
  std::shared_ptr<const detail::AreaMapImpl> base_;
  UnivariateFunction g_;
  ShearAxis axis_;
};

void validate_probe(const AreaMap& m, const ProbeSettings& probe) {
  DeterminantProbe worst;
  try {
    worst = probe_determinant(m, probe.nodes);
  } catch (const EvalError& e) {
    throw NumericalError(std::string("area map domain touches a singular locus: ") + e.what());
  }
  if (probe.enforce && !(worst.max_deviation <= probe.tolerance)) {
    std::ostringstream os;
    os << "area map rejected: |det - 1| = " << worst.max_deviation << " exceeds " << probe.tolerance << " at "
       << point_text(worst.k2, worst.k3);
    throw ConstructionError(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

AreaMap::AreaMap(std::shared_ptr<const detail::AreaMapImpl> impl, PlaneBox domain, AreaMapMode mode,
                 std::string description)
    : impl_(std::move(impl)), domain_(domain), mode_(mode), description_(std::move(description)) {}

PlanarJet AreaMap::jet(double k2, double k3) const {
  if (!domain_.contains(k2, k3)) throw DomainError("area map evaluated outside its domain at " + point_text(k2, k3));
  return impl_->jet(k2, k3);
}

HodographRoot AreaMap::solve_hodograph(double k2, double k3) const {
  const detail::AreaMapImpl* p = impl_.get();
  while (const auto* s = dynamic_cast<const ShearImpl*>(p)) p = s->base();
  const auto* pot = dynamic_cast<const PotentialImpl*>(p);
  if (!pot) throw Error("solve_hodograph: area map is not in potential mode");
  return pot->solve(k2, k3);
}

DeterminantProbe probe_determinant(const AreaMap& m, std::size_t nodes) {
  DeterminantProbe worst;
  worst.max_deviation = -1.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double k3 = m.domain().k3.node(i, nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
      const double k2 = m.domain().k2.node(j, nodes);
      const double dev = std::fabs(m.jet(k2, k3).det() - 1.0);
      if (!(dev <= worst.max_deviation)) worst = {std::isnan(dev) ? std::numeric_limits<double>::infinity() : dev, k2, k3};
    }
  }
  return worst;
}

AreaMap from_pair(const Expr& t2, const Expr& t3, const PlaneBox& domain, const ProbeSettings& probe) {
  AreaMap m(std::make_shared<PairImpl>(t2, t3), domain, AreaMapMode::pair,
            "pair(t2 = " + t2.str() + ", t3 = " + t3.str() + ")");
  validate_probe(m, probe);
  return m;
}

AreaMap from_potential(const Expr& phi, const PlaneBox& domain, const NewtonSettings& newton,
                       const ProbeSettings& probe) {
  AreaMap m(std::make_shared<PotentialImpl>(phi, domain, newton), domain, AreaMapMode::potential,
            "potential(phi = " + phi.str() + ")");
  validate_probe(m, probe);
  return m;
}

AreaMap circular(const PlaneBox& domain) {
  if (!(domain.k3.lo > 0.0))
    throw NumericalError("circular area map: domain touches the singular locus k3 <= 0 (k3 from " +
                         std::to_string(domain.k3.lo) + ")");
  AreaMap m(std::make_shared<CircularImpl>(), domain, AreaMapMode::circular, "circular");
  validate_probe(m, ProbeSettings{});
  return m;
}

AreaMap modify_shear(const AreaMap& m, const Expr& g, ShearAxis axis) {
  const char* what = axis == ShearAxis::tau2 ? "tau2 += G(tau3)" : "tau3 += G(tau2)";
  AreaMap out(std::make_shared<ShearImpl>(m.impl_, g, axis), m.domain(), m.mode(),
              m.description() + " + shear " + what + ", G = " + g.str());
  out.sheared_ = true;
  validate_probe(out, ProbeSettings{.enforce = false});
  return out;
}

Expr circular_potential() {
  return parse("0.5*t2*sqrt(2*k3-t2^2)+k3*atan(t2/sqrt(2*k3-t2^2))");
}

}  // namespace mhdflow
