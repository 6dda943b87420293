#include "mhdflow/transforms.hpp"

#include <cmath>
#include <sstream>

#include "mhdflow/error.hpp"
#include "mhdflow/function.hpp"

namespace mhdflow {
namespace {

/// Parameter substitution k -> K(k) with first and second partials.
struct Reparam {
  KPoint K{};
  std::array<std::array<double, 3>, 3> d1{};                         ///< d1[a][i] = dK^a/dk_i
  std::array<std::array<std::array<double, 3>, 3>, 3> d2{};          ///< d2[a][i][j]
};

class Substitution {
 public:
  virtual ~Substitution() = default;
  virtual Reparam at(const KPoint& k) const = 0;
};

/// x~(k) = x(K(k)) by the chain rule.
class ReparametrizedMap final : public detail::FlowMapImpl {
 public:
  ReparametrizedMap(std::shared_ptr<const detail::FlowMapImpl> inner, std::shared_ptr<const Substitution> sub)
      : inner_(std::move(inner)), sub_(std::move(sub)) {}

  MapJet jet(const KPoint& k) const override {
    const Reparam r = sub_->at(k);
    const MapJet x = inner_->jet(r.K);
    MapJet out;
    out.x = x.x;
    for (std::size_t i = 0; i < 3; ++i) {
      Vec3 di{};
      for (std::size_t a = 0; a < 3; ++a) di += x.d1[a] * r.d1[a][i];
      out.d1[i] = di;
      for (std::size_t j = 0; j < 3; ++j) {
        Vec3 dij{};
        for (std::size_t a = 0; a < 3; ++a) {
          if (r.d2[a][i][j] != 0.0) dij += x.d1[a] * r.d2[a][i][j];
          for (std::size_t b = 0; b < 3; ++b) {
            const double w = r.d1[a][i] * r.d1[b][j];
            if (w != 0.0) dij += x.d2[a][b] * w;
          }
        }
        out.d2[i][j] = dij;
      }
    }
    return out;
  }

 private:
  std::shared_ptr<const detail::FlowMapImpl> inner_;
  std::shared_ptr<const Substitution> sub_;
};

/// (k1, k2, k3) -> (phi k1, k2 / phi, k3), phi = phi(k3).
class Scaling final : public Substitution {
 public:
  explicit Scaling(const Expr& phi) : phi_(phi, {"k3"}) {}

  Reparam at(const KPoint& k) const override {
    const Jet<1> j = phi_.jet({k.k3()});
    const double f = j.value, f1 = j.d1[0], f2 = j.d2[0][0];
    const double k1 = k.k1(), k2 = k.k2();
    Reparam r;
    r.K = KPoint(f * k1, k2 / f, k.k3());
    r.d1[0] = {f, 0.0, f1 * k1};
    r.d1[1] = {0.0, 1.0 / f, -k2 * f1 / (f * f)};
    r.d1[2] = {0.0, 0.0, 1.0};
    r.d2[0][0][2] = r.d2[0][2][0] = f1;
    r.d2[0][2][2] = f2 * k1;
    r.d2[1][1][2] = r.d2[1][2][1] = -f1 / (f * f);
    r.d2[1][2][2] = -k2 * (f2 / (f * f) - 2.0 * f1 * f1 / (f * f * f));
    return r;
  }

 private:
  SmoothFunction<1> phi_;
};

/// (k1, k2, k3) -> (k1 + psi(k3), k2 + chi(k3), k3).
class Shift final : public Substitution {
 public:
  Shift(const Expr& psi, const Expr& chi) : psi_(psi, {"k3"}), chi_(chi, {"k3"}) {}

  Reparam at(const KPoint& k) const override {
    const Jet<1> p = psi_.jet({k.k3()});
    const Jet<1> c = chi_.jet({k.k3()});
    Reparam r;
    r.K = KPoint(k.k1() + p.value, k.k2() + c.value, k.k3());
    r.d1[0] = {1.0, 0.0, p.d1[0]};
    r.d1[1] = {0.0, 1.0, c.d1[0]};
    r.d1[2] = {0.0, 0.0, 1.0};
    r.d2[0][2][2] = p.d2[0][0];
    r.d2[1][2][2] = c.d2[0][0];
    return r;
  }

 private:
  SmoothFunction<1> psi_, chi_;
};

void require_one_signed(const Expr& phi, const Interval& k3) {
  const SmoothFunction<1> f(phi, {"k3"});
  constexpr std::size_t kProbe = 101;
  int sign = 0;
  for (std::size_t i = 0; i < kProbe; ++i) {
    const double z = k3.node(i, kProbe);
    double v = 0.0;
    try {
      v = f({z});
    } catch (const EvalError& e) {
      throw NumericalError("scaling factor cannot be evaluated at k3 = " + std::to_string(z) + ": " + e.what());
    }
    if (std::fabs(v) < 1e-12)
      throw ConstructionError("scaling factor '" + phi.str() + "' vanishes at k3 = " + std::to_string(z));
    const int s = v > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign)
      throw ConstructionError("scaling factor '" + phi.str() + "' changes sign on the k3 range");
    sign = s;
  }
}

struct SurfaceFrame {
  Vec3 x, x1, x2, n;
};

SurfaceFrame frame_at(const FlowMap& m, double k1, double k2, double c) {
  const MapJet j = m.jet(KPoint(k1, k2, c));
  const Vec3 cr = cross(j.d1[0], j.d1[1]);
  const double len = norm(cr);
  if (len < 1e-12) {
    std::ostringstream os;
    os << "degenerate surface parametrization |x1 x x2| = " << len << " at " << to_string(KPoint(k1, k2, c));
    throw NumericalError(os.str());
  }
  Vec3 n = cr / len;
  if (dot(n, j.d1[2]) < 0.0) n = -n;
  return {j.x, j.d1[0], j.d1[1], n};
}

}  // namespace

FlowMap bogoyavlenskij(const FlowMap& m, const Expr& phi) {
  require_one_signed(phi, m.domain()[2]);
  return FlowMap(std::make_shared<ReparametrizedMap>(m.impl(), std::make_shared<Scaling>(phi)), m.domain(),
                 m.family() + "+bogoyavlenskij", m.total_pressure());
}

FlowMap translate(const FlowMap& m, const Expr& psi, const Expr& chi) {
  return FlowMap(std::make_shared<ReparametrizedMap>(m.impl(), std::make_shared<Shift>(psi, chi)), m.domain(),
                 m.family() + "+translate", m.total_pressure());
}

void validate(const CurrentSheetSpec& spec, const FlowMap& m) {
  if (!std::isfinite(spec.phi_minus) || !std::isfinite(spec.phi_plus) || spec.phi_minus == 0.0 ||
      spec.phi_plus == 0.0)
    throw ConstructionError("current sheet: limiting scaling factors must be finite and nonzero");
  const Interval& k3 = m.domain()[2];
  if (!(spec.c > k3.lo && spec.c < k3.hi))
    throw ConstructionError("current sheet: c = " + std::to_string(spec.c) + " is not strictly inside the k3 range");
  if (spec.n1 == 0 || spec.n2 == 0) throw ConstructionError("current sheet: empty sample grid");
  if (!m.domain()[0].covers(spec.k1) || !m.domain()[1].covers(spec.k2))
    throw DomainError("current sheet: sample ranges leave the k-domain");
}

std::vector<SheetSample> current_sheet(const FlowMap& m, const CurrentSheetSpec& spec) {
  validate(spec, m);
  const double p1 = spec.phi_minus;
  const double p2 = spec.phi_plus;
  std::vector<SheetSample> out;
  out.reserve(spec.n1 * spec.n2);
  for (std::size_t i2 = 0; i2 < spec.n2; ++i2) {
    for (std::size_t i1 = 0; i1 < spec.n1; ++i1) {
      const double k1 = spec.k1.node(i1, spec.n1);
      const double k2 = spec.k2.node(i2, spec.n2);
      const SurfaceFrame f = frame_at(m, k1, k2, spec.c);
      const Vec3 J = 0.5 * (p1 - p2) * cross(f.n, f.x2 / (p1 * p2) + f.x1);
      out.push_back({k1, k2, f.x, f.n, J});
    }
  }
  return out;
}

std::vector<Vec3> current_sheet_oracle(const FlowMap& m, const CurrentSheetSpec& spec) {
  validate(spec, m);
  const double phis[2] = {spec.phi_minus, spec.phi_plus};
  // Each side is the flow scaled by its constant limiting factor; the
  // surface point x(k1, k2, c) sits at parameters (k1 / phi, k2 phi, c).
  const FlowMap side[2] = {bogoyavlenskij(m, Expr::constant(phis[0])),
                           bogoyavlenskij(m, Expr::constant(phis[1]))};
  std::vector<Vec3> out;
  out.reserve(spec.n1 * spec.n2);
  for (std::size_t i2 = 0; i2 < spec.n2; ++i2) {
    for (std::size_t i1 = 0; i1 < spec.n1; ++i1) {
      const double k1 = spec.k1.node(i1, spec.n1);
      const double k2 = spec.k2.node(i2, spec.n2);
      const SurfaceFrame f = frame_at(m, k1, k2, spec.c);
      Vec3 B[2];
      for (std::size_t s = 0; s < 2; ++s) {
        const MapJet j = side[s].jet_unchecked(KPoint(k1 / phis[s], k2 * phis[s], spec.c));
        B[s] = plasma_from_basis({j.d1[0], j.d1[1]}, m.total_pressure()).B;
      }
      out.push_back(cross(f.n, B[1] - B[0]));
    }
  }
  return out;
}

}  // namespace mhdflow
