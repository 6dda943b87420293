#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mhdflow/domain.hpp"
#include "mhdflow/flowmap.hpp"
#include "mhdflow/linalg.hpp"

namespace mhdflow {

enum class LineKind { streamline, magnetic };

std::string_view name_of(LineKind kind);

struct Polyline {
  LineKind kind = LineKind::streamline;
  KPoint seed{};
  std::vector<double> s;
  std::vector<Vec3> points;
  bool truncated = false;  ///< the parameter left the domain before s_max

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

struct SRange {
  double lo = 0.0;
  double hi = 1.0;
};

/// x(k1_0 + s/2, k2_0 + s/2, k3_0) at n uniform values of s; dx/ds = v.
Polyline streamline(const FlowMap& m, const KPoint& seed, SRange s, std::size_t samples);

/// x(k1_0 - s/2, k2_0 + s/2, k3_0) at n uniform values of s; dx/ds = B.
Polyline magnetic_line(const FlowMap& m, const KPoint& seed, SRange s, std::size_t samples);

/// RK4 integration of dx/ds = field(k), dk/ds = J^-1 field(k) from the seed.
/// A cross-check oracle for the closed-form lines; never used for output.
Polyline trace_rk4(const FlowMap& m, LineKind kind, const KPoint& seed, SRange s, std::size_t samples);

struct SurfaceMesh {
  double k3 = 0.0;
  std::size_t n1 = 0;  ///< vertices along k1
  std::size_t n2 = 0;  ///< vertices along k2
  std::vector<Vec3> vertices;             ///< k1 fastest
  std::vector<std::array<double, 2>> params;
  std::vector<std::array<std::size_t, 4>> quads;
  std::vector<std::size_t> degenerate_quads;
  std::map<std::string, std::vector<double>> scalars;
  bool welded = false;
};

struct TessellationOptions {
  std::size_t n1 = 32;
  std::size_t n2 = 32;
  bool scalars = false;     ///< attach a.b, |B| and p per vertex
  bool weld_seam = false;   ///< merge the last k2 column into the first
  double weld_tolerance = 1e-9;
};

/// Structured mesh of x(k1, k2, c) over the given parameter ranges.
SurfaceMesh tessellate_surface(const FlowMap& m, double c, const Interval& k1, const Interval& k2,
                               const TessellationOptions& options = {});

enum class Regime { sub_alfvenic, alfvenic, super_alfvenic };

std::string_view name_of(Regime r);

struct ClassifiedPoint {
  KPoint k{};
  double discriminant = 0.0;
  Regime regime = Regime::alfvenic;
};

/// Sign of a . b with dead band |a . b| < 1e-12 -> alfvenic.
std::vector<ClassifiedPoint> classify_grid(const FlowMap& m, const GridSpec& grid, double dead_band = 1e-12);
Regime classify(double discriminant, double dead_band = 1e-12);

struct FieldSample {
  KPoint k{};
  Vec3 x{};
  PlasmaState state{};
};

std::vector<FieldSample> sample_fields(const FlowMap& m, const GridSpec& grid);

}  // namespace mhdflow
