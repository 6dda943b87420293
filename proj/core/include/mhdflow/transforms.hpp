#pragma once

#include <cstddef>
#include <vector>

#include "mhdflow/domain.hpp"
#include "mhdflow/expr.hpp"
#include "mhdflow/flowmap.hpp"
#include "mhdflow/linalg.hpp"

namespace mhdflow {

/// x~(k) = x(phi(k3) k1, k2 / phi(k3), k3): a~ = phi a, b~ = b / phi, the
/// total pressure and every k3 = const surface are unchanged. phi is a
/// function of k3 and must keep one sign on the k3 range.
FlowMap bogoyavlenskij(const FlowMap& m, const Expr& phi);

/// x~(k) = x(k1 + psi(k3), k2 + chi(k3), k3).
FlowMap translate(const FlowMap& m, const Expr& psi, const Expr& chi);

/// A jump of the scaling factor at k3 = c. Side 1 is k3 < c, side 2 is k3 > c.
struct CurrentSheetSpec {
  double c = 0.0;
  double phi_minus = 1.0;
  double phi_plus = 1.0;
  Interval k1{};
  Interval k2{};
  std::size_t n1 = 32;
  std::size_t n2 = 32;
};

struct SheetSample {
  double k1 = 0.0;
  double k2 = 0.0;
  Vec3 x{};  ///< point on the discontinuity surface
  Vec3 n{};  ///< unit normal, n . dx/dk3 > 0
  Vec3 J{};  ///< surface current density
};

/// Throws ConstructionError for a vanishing phi or c outside the open k3
/// range, DomainError for samples outside the box.
void validate(const CurrentSheetSpec& spec, const FlowMap& m);

/// Closed-form surface current J = (phi1 - phi2)/2 n x (x2 / (phi1 phi2) + x1)
/// on the untransformed map. Throws NumericalError when |x1 x x2| < 1e-12.
std::vector<SheetSample> current_sheet(const FlowMap& m, const CurrentSheetSpec& spec);

/// Independent route: build the two constant-phi transformed flows, take
/// their limiting magnetic fields at the same physical point, return
/// n x (B2 - B1). Same sample order as current_sheet.
std::vector<Vec3> current_sheet_oracle(const FlowMap& m, const CurrentSheetSpec& spec);

}  // namespace mhdflow
