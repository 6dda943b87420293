#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace mhdflow {

/// A point (k1, k2, k3) of the curvilinear parameter space.
struct KPoint {
  std::array<double, 3> k{0.0, 0.0, 0.0};

  constexpr KPoint() = default;
  constexpr KPoint(double k1, double k2, double k3) : k{k1, k2, k3} {}

  constexpr double k1() const { return k[0]; }
  constexpr double k2() const { return k[1]; }
  constexpr double k3() const { return k[2]; }
  constexpr double operator[](std::size_t i) const { return k[i]; }
  constexpr double& operator[](std::size_t i) { return k[i]; }
  friend constexpr bool operator==(const KPoint&, const KPoint&) = default;
};

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr double width() const { return hi - lo; }
  constexpr double mid() const { return 0.5 * (lo + hi); }
  /// Boundaries included, with a relative slack that absorbs rounding of
  /// uniformly spaced grid nodes.
  bool contains(double v) const;
  bool covers(const Interval& other) const;
  /// i-th of n uniformly spaced nodes including both ends; n == 1 gives mid().
  double node(std::size_t i, std::size_t n) const;
  /// Cell-centred node: lo + (i + 1/2) * width / n.
  double cell_centre(std::size_t i, std::size_t n) const;
};

/// Axis-aligned box in (k1, k2, k3).
struct KBox {
  std::array<Interval, 3> axis{};

  constexpr const Interval& operator[](std::size_t i) const { return axis[i]; }
  constexpr Interval& operator[](std::size_t i) { return axis[i]; }
  bool contains(const KPoint& p) const;
  /// Shrinks every axis by `margin` on both sides.
  KBox inset(double margin) const;
};

/// Axis-aligned box in (k2, k3), the domain of an area-preserving map.
struct PlaneBox {
  Interval k2{};
  Interval k3{};

  bool contains(double k2v, double k3v) const { return k2.contains(k2v) && k3.contains(k3v); }
};

/// Uniform grid resolution per axis.
struct GridSpec {
  std::array<std::size_t, 3> n{21, 21, 21};

  std::size_t size() const { return n[0] * n[1] * n[2]; }
  std::string str() const;
};

/// Node coordinates of a uniform grid over `box`, boundaries included,
/// ordered with k1 fastest.
std::vector<KPoint> grid_points(const KBox& box, const GridSpec& grid);

std::string to_string(const KPoint& p);

}  // namespace mhdflow
