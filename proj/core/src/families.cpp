#include "mhdflow/families.hpp"

#include <cmath>
#include <optional>

#include "mhdflow/error.hpp"
#include "mhdflow/function.hpp"

namespace mhdflow {

std::string_view name_of(Family f) {
  switch (f) {
    case Family::s1: return "s1";
    case Family::s2: return "s2";
    case Family::s3: return "s3";
    case Family::general: return "general";
  }
  return "?";
}

namespace {

/// A vector function of (u, k3) with partials; u is k1 for the generator
/// part and k2 for the directrix part.
struct PartJet {
  Vec3 value{};
  std::array<Vec3, 2> d1{};
  std::array<std::array<Vec3, 2>, 2> d2{};
};

class Part {
 public:
  virtual ~Part() = default;
  virtual PartJet jet(double u, double k3) const = 0;
};

class ExpressionPart final : public Part {
 public:
  ExpressionPart(const std::array<Expr, 3>& comps, const std::string& first) {
    for (std::size_t c = 0; c < 3; ++c) comps_[c] = SmoothFunction<2>(comps[c], {first, "k3"});
  }

  PartJet jet(double u, double k3) const override {
    PartJet out;
    for (std::size_t c = 0; c < 3; ++c) {
      const Jet<2> j = comps_[c].jet({u, k3});
      out.value[c] = j.value;
      for (std::size_t i = 0; i < 2; ++i) {
        out.d1[i][c] = j.d1[i];
        for (std::size_t l = 0; l < 2; ++l) out.d2[i][l][c] = j.d2[i][l];
      }
    }
    return out;
  }

 private:
  std::array<SmoothFunction<2>, 3> comps_;
};

/// sigma = k1 e1 + beta(k1) e2 + gamma(k1) e3; independent of k3.
class GeneratorPart final : public Part {
 public:
  GeneratorPart(std::optional<Expr> beta, std::optional<Expr> gamma) {
    if (beta) beta_ = SmoothFunction<1>(*beta, {"k1"});
    if (gamma) gamma_ = SmoothFunction<1>(*gamma, {"k1"});
  }

  PartJet jet(double k1, double) const override {
    PartJet out;
    out.value[0] = k1;
    out.d1[0][0] = 1.0;
    const std::optional<SmoothFunction<1>>* fns[2] = {&beta_, &gamma_};
    for (std::size_t c = 0; c < 2; ++c) {
      if (!*fns[c]) continue;
      const Jet<1> j = (*fns[c])->jet({k1});
      out.value[c + 1] = j.value;
      out.d1[0][c + 1] = j.d1[0];
      out.d2[0][0][c + 1] = j.d2[0][0];
    }
    return out;
  }

 private:
  std::optional<SmoothFunction<1>> beta_, gamma_;
};

/// tau = (tau1, tau2, tau3) with (tau2, tau3) from an area map and tau1
/// either a free function of (k2, k3), F(tau3), or zero.
class DirectrixPart final : public Part {
 public:
  DirectrixPart(AreaMap am, std::optional<Expr> tau1, std::optional<Expr> F) : am_(std::move(am)) {
    if (tau1) tau1_ = SmoothFunction<2>(*tau1, {"k2", "k3"});
    if (F) F_ = UnivariateFunction(*F);
  }

  PartJet jet(double k2, double k3) const override {
    const PlanarJet p = am_.jet_unchecked(k2, k3);
    PartJet out;
    for (std::size_t c = 0; c < 2; ++c) {
      out.value[c + 1] = p.value[c];
      for (std::size_t i = 0; i < 2; ++i) {
        out.d1[i][c + 1] = p.d1[c][i];
        for (std::size_t l = 0; l < 2; ++l) out.d2[i][l][c + 1] = p.d2[c][i][l];
      }
    }
    if (tau1_) {
      const Jet<2> j = tau1_->jet({k2, k3});
      out.value[0] = j.value;
      for (std::size_t i = 0; i < 2; ++i) {
        out.d1[i][0] = j.d1[i];
        for (std::size_t l = 0; l < 2; ++l) out.d2[i][l][0] = j.d2[i][l];
      }
    } else if (F_) {
      const Jet<1> f = F_->jet(p.value[1]);
      const double F1 = f.d1[0];
      const double F2 = f.d2[0][0];
      out.value[0] = f.value;
      for (std::size_t i = 0; i < 2; ++i) {
        out.d1[i][0] = F1 * p.d1[1][i];
        for (std::size_t l = 0; l < 2; ++l) out.d2[i][l][0] = F2 * p.d1[1][i] * p.d1[1][l] + F1 * p.d2[1][i][l];
      }
    }
    return out;
  }

 private:
  AreaMap am_;
  std::optional<SmoothFunction<2>> tau1_;
  std::optional<UnivariateFunction> F_;
};

/// x = sigma(k1, k3) + tau(k2, k3); the k1/k2 mixed block is zero by construction.
class TranslationalMap final : public detail::FlowMapImpl {
 public:
  TranslationalMap(std::shared_ptr<const Part> sigma, std::shared_ptr<const Part> tau)
      : sigma_(std::move(sigma)), tau_(std::move(tau)) {}

  MapJet jet(const KPoint& k) const override {
    const PartJet s = sigma_->jet(k.k1(), k.k3());
    const PartJet t = tau_->jet(k.k2(), k.k3());
    MapJet out;
    out.x = s.value + t.value;
    out.d1[0] = s.d1[0];
    out.d1[1] = t.d1[0];
    out.d1[2] = s.d1[1] + t.d1[1];
    out.d2[0][0] = s.d2[0][0];
    out.d2[0][2] = s.d2[0][1];
    out.d2[2][0] = s.d2[1][0];
    out.d2[1][1] = t.d2[0][0];
    out.d2[1][2] = t.d2[0][1];
    out.d2[2][1] = t.d2[1][0];
    out.d2[2][2] = s.d2[1][1] + t.d2[1][1];
    return out;
  }

 private:
  std::shared_ptr<const Part> sigma_, tau_;
};

void require_cover(const AreaMap& am, const KBox& domain) {
  if (!am.domain().k2.covers(domain[1]) || !am.domain().k3.covers(domain[2]))
    throw ConstructionError("area map domain does not cover the scene's (k2, k3) domain");
}

// Coarse probe over the box, boundaries included: a point where the map
// cannot be evaluated means the domain touches a singular locus.
void probe_singularities(const FlowMap& m) {
  for (const KPoint& k : grid_points(m.domain(), GridSpec{{5, 5, 5}})) {
    try {
      const MapJet j = m.jet(k);
      for (const auto& col : j.d1)
        for (double v : col.c)
          if (!std::isfinite(v)) throw EvalError("non-finite partial");
    } catch (const EvalError& e) {
      throw NumericalError("scene domain touches a singular locus at " + to_string(k) + ": " + e.what());
    }
  }
}

FlowMap make(std::shared_ptr<const Part> sigma, std::shared_ptr<const Part> tau, const KBox& domain,
             std::string family, double total_pressure) {
  FlowMap m(std::make_shared<TranslationalMap>(std::move(sigma), std::move(tau)), domain, std::move(family),
            total_pressure);
  probe_singularities(m);
  return m;
}

}  // namespace

FlowMap build_s1(const Expr& tau1, const AreaMap& am, double total_pressure, const KBox& domain) {
  require_cover(am, domain);
  return make(std::make_shared<GeneratorPart>(std::nullopt, std::nullopt),
              std::make_shared<DirectrixPart>(am, tau1, std::nullopt), domain, "s1", total_pressure);
}

FlowMap build_s2(const Expr& beta, const Expr& F, const AreaMap& am, double total_pressure, const KBox& domain) {
  require_cover(am, domain);
  // tau1 = F(tau3) needs tau3 to vary; a constant tau3 is not interpreted.
  bool varies = false;
  for (std::size_t i = 0; i < 5 && !varies; ++i)
    for (std::size_t j = 0; j < 5 && !varies; ++j) {
      const PlanarJet p = am.jet(domain[1].node(j, 5), domain[2].node(i, 5));
      varies = std::fabs(p.d1[1][0]) > 1e-14 || std::fabs(p.d1[1][1]) > 1e-14;
    }
  if (!varies) throw ConstructionError("s2 scene rejected: tau3 is constant in (k2, k3)");
  return make(std::make_shared<GeneratorPart>(beta, std::nullopt),
              std::make_shared<DirectrixPart>(am, std::nullopt, F), domain, "s2", total_pressure);
}

FlowMap build_s3(const Expr& beta, const Expr& gamma, const AreaMap& am, double total_pressure,
                 const KBox& domain) {
  require_cover(am, domain);
  return make(std::make_shared<GeneratorPart>(beta, gamma),
              std::make_shared<DirectrixPart>(am, std::nullopt, std::nullopt), domain, "s3", total_pressure);
}

FlowMap build_translational(const std::array<Expr, 3>& sigma, const std::array<Expr, 3>& tau,
                            double total_pressure, const KBox& domain) {
  return make(std::make_shared<ExpressionPart>(sigma, "k1"), std::make_shared<ExpressionPart>(tau, "k2"), domain,
              "general", total_pressure);
}

// ---------------------------------------------------------------------------
// Declarative construction

namespace {

// Field `present` must match `required`; `owner` names the family or mode.
void check_field(const std::string& owner, bool required, bool present, const char* field) {
  if (required && !present) throw ConstructionError(owner + " requires '" + field + "'");
  if (!required && present) throw ConstructionError(owner + " does not take '" + field + "'");
}

}  // namespace

void validate(const SceneSpec& spec) {
  const std::string owner = "family " + std::string(name_of(spec.family));
  const bool has_sigma = !spec.sigma[0].empty() || !spec.sigma[1].empty() || !spec.sigma[2].empty();
  const bool has_tau = !spec.tau[0].empty() || !spec.tau[1].empty() || !spec.tau[2].empty();
  const bool s1 = spec.family == Family::s1;
  const bool s2 = spec.family == Family::s2;
  const bool s3 = spec.family == Family::s3;
  const bool general = spec.family == Family::general;

  check_field(owner, s1, !spec.tau1.empty(), "t1");
  check_field(owner, s2 || s3, !spec.beta.empty(), "beta");
  check_field(owner, s2, !spec.F.empty(), "F");
  check_field(owner, s3, !spec.gamma.empty(), "gamma");
  check_field(owner, general, has_sigma, "sigma");
  check_field(owner, general, has_tau, "tau");
  check_field(owner, !general, spec.areamap.has_value(), "areamap");
  if (general) {
    for (const auto& s : spec.sigma) check_field(owner, true, !s.empty(), "sigma[3]");
    for (const auto& t : spec.tau) check_field(owner, true, !t.empty(), "tau[3]");
  }
  if (spec.areamap) {
    const AreaMapSpec& a = *spec.areamap;
    const std::string mode = "areamap mode " + std::string(name_of(a.mode));
    const bool pair = a.mode == AreaMapMode::pair;
    const bool pot = a.mode == AreaMapMode::potential;
    check_field(mode, pair, !a.t2.empty(), "t2");
    check_field(mode, pair, !a.t3.empty(), "t3");
    check_field(mode, pot, !a.phi.empty(), "phi");
    if (!pot) check_field(mode, false, a.bracket.has_value(), "bracket");
  }
  for (std::size_t i = 0; i < 3; ++i)
    if (!(spec.domain[i].lo <= spec.domain[i].hi))
      throw ConstructionError("domain interval k" + std::to_string(i + 1) + " is inverted");
}

AreaMap build_areamap(const AreaMapSpec& spec, const PlaneBox& domain) {
  AreaMap am = [&] {
    switch (spec.mode) {
      case AreaMapMode::pair: return from_pair(parse(spec.t2), parse(spec.t3), domain);
      case AreaMapMode::potential: {
        NewtonSettings newton;
        newton.bracket = spec.bracket;
        return from_potential(parse(spec.phi), domain, newton);
      }
      case AreaMapMode::circular: break;
    }
    return circular(domain);
  }();
  for (const ShearSpec& s : spec.shear) am = modify_shear(am, parse(s.g), s.axis);
  return am;
}

FlowMap build(const SceneSpec& spec) {
  validate(spec);
  const double P0 = spec.total_pressure;
  if (spec.family == Family::general) {
    std::array<Expr, 3> sigma, tau;
    for (std::size_t i = 0; i < 3; ++i) {
      sigma[i] = parse(spec.sigma[i]);
      tau[i] = parse(spec.tau[i]);
    }
    return build_translational(sigma, tau, P0, spec.domain);
  }
  const AreaMap am = build_areamap(*spec.areamap, PlaneBox{spec.domain[1], spec.domain[2]});
  switch (spec.family) {
    case Family::s1: return build_s1(parse(spec.tau1), am, P0, spec.domain);
    case Family::s2: return build_s2(parse(spec.beta), parse(spec.F), am, P0, spec.domain);
    case Family::s3: return build_s3(parse(spec.beta), parse(spec.gamma), am, P0, spec.domain);
    case Family::general: break;
  }
  throw ConstructionError("unknown family");
}

}  // namespace mhdflow
