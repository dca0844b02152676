#pragma once

// Truncated uniform grids on [-R, R]^3 with cell-centred samples.
//
// Layout: value (i1, i2, i3) lives at flat index (i1 * n + i2) * n + i3, i.e.
// x1 is the slowest axis and x3 the fastest. Coordinates are
// x = -R + (i + 1/2) * h with h = 2R / n.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "reveuler/error.hpp"
#include "reveuler/geometry.hpp"

namespace reveuler {

struct GridSpec {
  double half_width = 8.0;
  int n = 64;

  [[nodiscard]] double spacing() const noexcept { return 2.0 * half_width / n; }
  [[nodiscard]] double coordinate(int i) const noexcept { return -half_width + (i + 0.5) * spacing(); }
  [[nodiscard]] std::size_t size() const noexcept {
    const auto m = static_cast<std::size_t>(n);
    return m * m * m;
  }
  [[nodiscard]] std::size_t index(int i1, int i2, int i3) const noexcept {
    const auto m = static_cast<std::size_t>(n);
    return (static_cast<std::size_t>(i1) * m + static_cast<std::size_t>(i2)) * m + static_cast<std::size_t>(i3);
  }
  [[nodiscard]] std::array<int, 3> indices(std::size_t flat) const noexcept {
    const auto m = static_cast<std::size_t>(n);
    return {static_cast<int>(flat / (m * m)), static_cast<int>((flat / m) % m), static_cast<int>(flat % m)};
  }
  [[nodiscard]] Point3 point(std::size_t flat) const noexcept {
    const auto ix = indices(flat);
    return {coordinate(ix[0]), coordinate(ix[1]), coordinate(ix[2])};
  }
  [[nodiscard]] double cell_volume() const noexcept {
    const double h = spacing();
    return h * h * h;
  }

  /// n even and >= 16, R > 0.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, double fill = 0.0) : grid_(grid), values_(grid.size(), fill) {}
  ScalarField(const GridSpec& grid, std::vector<double> values);

  [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

  double& operator[](std::size_t k) noexcept { return values_[k]; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double& at(int i1, int i2, int i3) noexcept { return values_[grid_.index(i1, i2, i3)]; }
  [[nodiscard]] double at(int i1, int i2, int i3) const noexcept { return values_[grid_.index(i1, i2, i3)]; }

  [[nodiscard]] double max_abs() const noexcept;
  [[nodiscard]] bool all_finite() const noexcept;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s) noexcept;
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

 private:
  void require_same_grid(const ScalarField& o) const;

  GridSpec grid_{};
  std::vector<double> values_;
};

/// Pointwise product.
ScalarField multiply(const ScalarField& a, const ScalarField& b);

struct VectorField {
  std::array<ScalarField, 3> c;
  /// Measured max |div| when known.
  std::optional<double> max_divergence;

  VectorField() = default;
  explicit VectorField(const GridSpec& grid) : c{ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}
  VectorField(ScalarField a, ScalarField b, ScalarField d) : c{std::move(a), std::move(b), std::move(d)} {}

  [[nodiscard]] const GridSpec& grid() const noexcept { return c[0].grid(); }
  ScalarField& operator[](int i) noexcept { return c[static_cast<std::size_t>(i)]; }
  const ScalarField& operator[](int i) const noexcept { return c[static_cast<std::size_t>(i)]; }
  [[nodiscard]] double max_abs() const noexcept;
};

VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator+(const VectorField& a, const VectorField& b);

template <class Field>
struct TimeSlab {
  std::vector<double> times;
  std::vector<Field> fields;

  [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
  /// times[0] == 0, strictly ascending, one field per time.
  void validate() const {
    if (times.empty() || times.size() != fields.size()) {
      throw Error(ErrorKind::Validation, "time slab needs one field per time node");
    }
    if (times.front() != 0.0) throw Error(ErrorKind::Validation, "time slab must start at t = 0");
    for (std::size_t k = 1; k < times.size(); ++k) {
      if (!(times[k] > times[k - 1])) throw Error(ErrorKind::Validation, "time slab nodes must ascend");
    }
  }
};

using ScalarSlab = TimeSlab<ScalarField>;
using VectorSlab = TimeSlab<VectorField>;

/// Geometric time nodes on [0, T]: node 0 is 0 and successive intervals grow
/// by `ratio` (graded toward t = 0).
std::vector<double> graded_time_nodes(double horizon, int intervals, double ratio = 1.5);

ScalarField sample(const GridSpec& grid, const std::function<double(const Point3&)>& f);
VectorField sample_vector(const GridSpec& grid, const std::function<Vec3(const Point3&)>& f);

/// Cubic Lagrange interpolation of grid values at an arbitrary point; the
/// field is taken as zero outside the box.
double interpolate(const ScalarField& f, const Point3& x);

}  // namespace reveuler
