#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include "mhdflow/domain.hpp"
#include "mhdflow/expr.hpp"

namespace mhdflow {

/// (tau2, tau3) and their partials with respect to (k2, k3).
/// Index 0 is tau2 / k2, index 1 is tau3 / k3.
struct PlanarJet {
  std::array<double, 2> value{};
  std::array<std::array<double, 2>, 2> d1{};                      ///< d1[c][j] = d tau_c / d k_j
  std::array<std::array<std::array<double, 2>, 2>, 2> d2{};       ///< d2[c][i][j]

  /// tau2_2 * tau3_3 - tau3_2 * tau2_3.
  double det() const { return d1[0][0] * d1[1][1] - d1[1][0] * d1[0][1]; }
};

enum class AreaMapMode { pair, potential, circular };
enum class ShearAxis { tau2 = 2, tau3 = 3 };

std::string_view name_of(AreaMapMode mode);

/// Root finding for the implicit potential construction.
struct NewtonSettings {
  double tolerance = 1e-13;  ///< on |K(k3, tau2) - k2|, relative to max(1, |k2|)
  int max_iterations = 50;
  /// Optional bracket for tau2; its midpoint seeds continuation and it
  /// enables a bisection fallback.
  std::optional<std::array<double, 2>> bracket;
  /// Seed-table resolution (k2 nodes x k3 nodes) built at construction.
  std::size_t seed_nodes_k2 = 65;
  std::size_t seed_nodes_k3 = 33;
};

/// Determinant validation performed at construction.
struct ProbeSettings {
  std::size_t nodes = 11;     ///< per axis, boundaries included
  double tolerance = 1e-9;
  bool enforce = true;        ///< false builds without rejecting (test fixtures only)
};

struct DeterminantProbe {
  double max_deviation = 0.0;  ///< max |det - 1|
  double k2 = 0.0;
  double k3 = 0.0;             ///< location of the maximum
};

/// Outcome of one hodograph Newton solve.
struct HodographRoot {
  double tau2 = 0.0;
  int iterations = 0;
};

namespace detail {
class AreaMapImpl {
 public:
  virtual ~AreaMapImpl() = default;
  virtual PlanarJet jet(double k2, double k3) const = 0;
};
}  // namespace detail

/// Area-preserving planar map (k2, k3) -> (tau2, tau3) with analytic first
/// and second partials. Immutable; evaluation is thread-safe.
class AreaMap {
 public:
  AreaMap(std::shared_ptr<const detail::AreaMapImpl> impl, PlaneBox domain, AreaMapMode mode,
          std::string description);

  /// Throws DomainError outside the declared box.
  PlanarJet jet(double k2, double k3) const;
  /// No domain check; for composition inside transformed maps whose
  /// parameters may leave the original box.
  PlanarJet jet_unchecked(double k2, double k3) const { return impl_->jet(k2, k3); }
  double det(double k2, double k3) const { return jet(k2, k3).det(); }

  const PlaneBox& domain() const { return domain_; }
  AreaMapMode mode() const { return mode_; }
  bool sheared() const { return sheared_; }
  const std::string& description() const { return description_; }

  /// Potential mode only: the Newton solve behind jet(), with its iteration count.
  HodographRoot solve_hodograph(double k2, double k3) const;

 private:
  friend AreaMap modify_shear(const AreaMap&, const Expr&, ShearAxis);

  std::shared_ptr<const detail::AreaMapImpl> impl_;
  PlaneBox domain_;
  AreaMapMode mode_;
  std::string description_;
  bool sheared_ = false;
};

/// Direct pair of expressions in k2, k3. Rejected (ConstructionError) when the
/// determinant misses 1 on the probe grid; NumericalError when the domain
/// touches a point where the expressions cannot be evaluated.
AreaMap from_pair(const Expr& t2, const Expr& t3, const PlaneBox& domain, const ProbeSettings& probe = {});

/// Implicit map from a potential Phi(k3, t2): k2 = dPhi/dk3, tau3 = dPhi/dt2.
AreaMap from_potential(const Expr& phi, const PlaneBox& domain, const NewtonSettings& newton = {},
                       const ProbeSettings& probe = {});

/// Closed form tau2 = sqrt(2 k3) sin k2, tau3 = sqrt(2 k3) cos k2 (nested
/// circles). Requires k3 > 0 on the whole box.
AreaMap circular(const PlaneBox& domain);

/// tau2 += G(tau3) (axis tau2) or tau3 += G(tau2) (axis tau3). A shear, so
/// the determinant is unchanged.
AreaMap modify_shear(const AreaMap& m, const Expr& g, ShearAxis axis);

/// max |det - 1| over an n x n grid of the map's domain, boundaries included.
DeterminantProbe probe_determinant(const AreaMap& m, std::size_t nodes);

/// The potential whose implicit map is the closed-form circular one.
Expr circular_potential();

}  // namespace mhdflow
