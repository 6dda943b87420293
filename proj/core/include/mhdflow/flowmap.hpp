#pragma once

#include <array>
#include <memory>
#include <string>

#include "mhdflow/domain.hpp"
#include "mhdflow/expr.hpp"
#include "mhdflow/linalg.hpp"

namespace mhdflow {

/// x(k) with its first and second partials.
/// d1[i] = dx/dk_i, d2[i][j] = d/dk_j (dx/dk_i); indices are 0-based.
struct MapJet {
  Vec3 x{};
  std::array<Vec3, 3> d1{};
  std::array<std::array<Vec3, 3>, 3> d2{};

  Mat3 jacobian() const { return Mat3::from_columns(d1[0], d1[1], d1[2]); }
};

/// Commuting basis: a = dx/dk1 = v - B, b = dx/dk2 = v + B.
struct Basis {
  Vec3 a{};
  Vec3 b{};
};

/// Plasma state at a point, unit density.
struct PlasmaState {
  Vec3 v{};
  Vec3 B{};
  double P = 0.0;  ///< total pressure p + |B|^2 / 2
  double p = 0.0;  ///< hydrodynamic pressure
};

inline PlasmaState plasma_from_basis(const Basis& basis, double total_pressure) {
  PlasmaState s;
  s.v = 0.5 * (basis.b + basis.a);
  s.B = 0.5 * (basis.b - basis.a);
  s.P = total_pressure;
  s.p = total_pressure - 0.5 * dot(s.B, s.B);
  return s;
}

namespace detail {
class FlowMapImpl {
 public:
  virtual ~FlowMapImpl() = default;
  virtual MapJet jet(const KPoint& k) const = 0;
};
}  // namespace detail

/// The curvilinear solution map k -> x with a declared k-domain box and a
/// constant total pressure. Immutable; every evaluator is pure.
class FlowMap {
 public:
  FlowMap(std::shared_ptr<const detail::FlowMapImpl> impl, KBox domain, std::string family,
          double total_pressure);

  /// Throws DomainError outside the box.
  MapJet jet(const KPoint& k) const;
  /// No domain check; used when composing maps.
  MapJet jet_unchecked(const KPoint& k) const { return impl_->jet(k); }

  Vec3 position(const KPoint& k) const { return jet(k).x; }
  Basis basis_at(const KPoint& k) const;
  PlasmaState fields_at(const KPoint& k) const;
  /// det(dx/dk).
  double jacobian_det(const KPoint& k) const;
  /// a . b = |v|^2 - |B|^2; negative sub-alfvenic, zero alfvenic, positive super.
  double alfven_discriminant(const KPoint& k) const;

  const KBox& domain() const { return domain_; }
  const std::string& family() const { return family_; }
  double total_pressure() const { return total_pressure_; }

  FlowMap with_domain(const KBox& box) const;
  const std::shared_ptr<const detail::FlowMapImpl>& impl() const { return impl_; }

 private:
  void require_inside(const KPoint& k) const;

  std::shared_ptr<const detail::FlowMapImpl> impl_;
  KBox domain_;
  std::string family_;
  double total_pressure_;
};

/// Map given directly by three expressions x^i(k1, k2, k3). No structural
/// guarantees; verify decides whether it is a solution.
FlowMap from_expressions(const std::array<Expr, 3>& components, const KBox& domain, double total_pressure = 0.0,
                         std::string family = "expressions");

/// x = k.
FlowMap identity_map(const KBox& domain, double total_pressure = 0.0);

}  // namespace mhdflow
