#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace mhdflow {

struct Vec3 {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : c{x, y, z} {}

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }

  constexpr Vec3& operator+=(const Vec3& o) {
    for (std::size_t i = 0; i < 3; ++i) c[i] += o.c[i];
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    for (std::size_t i = 0; i < 3; ++i) c[i] -= o.c[i];
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(Vec3 a) { return a *= -1.0; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }

constexpr double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline double max_abs(const Vec3& a) {
  return std::fmax(std::fabs(a[0]), std::fmax(std::fabs(a[1]), std::fabs(a[2])));
}

/// 3x3 matrix stored by columns; column j is the partial derivative of a
/// vector map with respect to its j-th argument.
struct Mat3 {
  std::array<Vec3, 3> col{};

  static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    return Mat3{{c0, c1, c2}};
  }
  static constexpr Mat3 identity() { return from_columns({1, 0, 0}, {0, 1, 0}, {0, 0, 1}); }

  constexpr double operator()(std::size_t row, std::size_t column) const { return col[column][row]; }

  constexpr double det() const { return dot(col[0], cross(col[1], col[2])); }

  constexpr Vec3 operator*(const Vec3& v) const { return col[0] * v[0] + col[1] * v[1] + col[2] * v[2]; }

  constexpr Mat3 operator*(const Mat3& o) const { return from_columns((*this) * o.col[0], (*this) * o.col[1], (*this) * o.col[2]); }

  constexpr double trace() const { return col[0][0] + col[1][1] + col[2][2]; }

  /// Inverse via the adjugate; the caller guards against a vanishing determinant.
  constexpr Mat3 inverse() const {
    const double d = det();
    // Rows of the inverse are the cross products of columns.
    const Vec3 r0 = cross(col[1], col[2]) / d;
    const Vec3 r1 = cross(col[2], col[0]) / d;
    const Vec3 r2 = cross(col[0], col[1]) / d;
    return from_columns({r0[0], r1[0], r2[0]}, {r0[1], r1[1], r2[1]}, {r0[2], r1[2], r2[2]});
  }
};

}  // namespace mhdflow
