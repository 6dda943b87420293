#include "mhdflow/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mhdflow {
namespace {

double slack(const Interval& i) { return 1e-12 * std::max({1.0, std::fabs(i.lo), std::fabs(i.hi)}); }

}  // namespace

bool Interval::contains(double v) const {
  const double s = slack(*this);
  return v >= lo - s && v <= hi + s;
}

bool Interval::covers(const Interval& other) const { return contains(other.lo) && contains(other.hi); }

double Interval::node(std::size_t i, std::size_t n) const {
  if (n <= 1) return mid();
  if (i + 1 == n) return hi;
  return lo + width() * static_cast<double>(i) / static_cast<double>(n - 1);
}

double Interval::cell_centre(std::size_t i, std::size_t n) const {
  return lo + width() * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
}

bool KBox::contains(const KPoint& p) const {
  return axis[0].contains(p[0]) && axis[1].contains(p[1]) && axis[2].contains(p[2]);
}

KBox KBox::inset(double margin) const {
  KBox out = *this;
  for (auto& a : out.axis) {
    a.lo += margin;
    a.hi -= margin;
  }
  return out;
}

std::string GridSpec::str() const {
  std::ostringstream os;
  os << n[0] << 'x' << n[1] << 'x' << n[2];
  return os.str();
}

std::vector<KPoint> grid_points(const KBox& box, const GridSpec& grid) {
  std::vector<KPoint> pts;
  pts.reserve(grid.size());
  for (std::size_t i3 = 0; i3 < grid.n[2]; ++i3)
    for (std::size_t i2 = 0; i2 < grid.n[1]; ++i2)
      for (std::size_t i1 = 0; i1 < grid.n[0]; ++i1)
        pts.emplace_back(box[0].node(i1, grid.n[0]), box[1].node(i2, grid.n[1]), box[2].node(i3, grid.n[2]));
  return pts;
}

std::string to_string(const KPoint& p) {
  std::ostringstream os;
  os.precision(10);
  os << '(' << p[0] << ", " << p[1] << ", " << p[2] << ')';
  return os.str();
}

}  // namespace mhdflow
