#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mhdflow/domain.hpp"
#include "mhdflow/flowmap.hpp"

namespace mhdflow {

struct ResidualEntry {
  std::string name;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  KPoint argmax{};
};

struct PointResiduals {
  KPoint k{};
  std::vector<double> values;  ///< same order as ResidualReport::entries
};

/// Per-equation residual statistics over a sampling grid.
struct ResidualReport {
  std::string check;  ///< "reduced", "physical" or "fd_crosscheck"
  KBox box{};
  GridSpec grid{};
  double tolerance = 0.0;
  std::vector<ResidualEntry> entries;
  std::size_t points = 0;  ///< points evaluated
  std::vector<KPoint> skipped;  ///< near-singular Jacobian points
  double min_p = 0.0;
  KPoint argmin_p{};
  bool pass = false;
  std::vector<PointResiduals> per_point;  ///< filled when requested

  double max_residual() const;
  const ResidualEntry& entry(const std::string& name) const;
};

struct VerifyOptions {
  GridSpec grid{};
  double tolerance = 1e-8;
  bool keep_points = false;
  /// Points with |det J| below this are skipped by verify_physical.
  double singular_det = 1e-8;
};

/// Residuals of the reduced system: x_i . x_12 + P_i for i = 1..3 and
/// det(dx/dk) - 1, from analytic partials.
ResidualReport verify_reduced(const FlowMap& m, const VerifyOptions& options = {});

/// Residuals of the stationary ideal MHD equations in Cartesian space,
/// reconstructed by the chain rule grad_x = J^-T grad_k: momentum,
/// induction, div v, div B. Does not use the reduced system.
ResidualReport verify_physical(const FlowMap& m, const VerifyOptions& options = {});

/// Analytic first and second partials against central differences of step
/// h (second partials difference the analytic first ones). Deviations are
/// relative: |analytic - fd| / (1 + |analytic|). The grid is inset by 2h.
ResidualReport fd_crosscheck(const FlowMap& m, double h, const VerifyOptions& options = {});

std::string to_json(const ResidualReport& r, int indent = 2);
std::string to_text(const ResidualReport& r);
/// Header plus one row per grid point; needs keep_points.
std::string to_csv(const ResidualReport& r);

}  // namespace mhdflow
