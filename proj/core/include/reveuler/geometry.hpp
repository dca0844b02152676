#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace reveuler {

/// Spatial axis index, 0-based (axis 0 is x1).
using Axis = int;

struct Point3 {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  [[nodiscard]] double operator[](Axis a) const noexcept { return a == 0 ? x1 : (a == 1 ? x2 : x3); }
  double& operator[](Axis a) noexcept { return a == 0 ? x1 : (a == 1 ? x2 : x3); }

  [[nodiscard]] double norm2() const noexcept { return x1 * x1 + x2 * x2 + x3 * x3; }
  [[nodiscard]] double norm() const noexcept { return std::sqrt(norm2()); }
  [[nodiscard]] bool finite() const noexcept {
    return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3);
  }

  friend Point3 operator+(Point3 a, Point3 b) noexcept { return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3}; }
  friend Point3 operator-(Point3 a, Point3 b) noexcept { return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3}; }
  friend Point3 operator*(double s, Point3 a) noexcept { return {s * a.x1, s * a.x2, s * a.x3}; }
  friend bool operator==(const Point3&, const Point3&) = default;
};

/// Point with coordinate `axis` negated (the reflection y -> y^- of the kernel identities).
[[nodiscard]] inline Point3 reflect(Point3 p, Axis axis) noexcept {
  p[axis] = -p[axis];
  return p;
}

/// Axis-aligned box [lo, hi].
struct Box {
  Point3 lo;
  Point3 hi;

  [[nodiscard]] bool contains(const Point3& p) const noexcept {
    for (Axis a = 0; a < 3; ++a) {
      if (p[a] < lo[a] || p[a] > hi[a]) return false;
    }
    return true;
  }
  [[nodiscard]] static Box cube(double half) noexcept { return {{-half, -half, -half}, {half, half, half}}; }
};

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

}  // namespace reveuler
