#include "reveuler/grid.hpp"

#include <algorithm>
#include <cmath>

namespace reveuler {

void GridSpec::validate() const {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw Error(ErrorKind::Validation, "grid half-width must be > 0");
  if (n < 16 || n % 2 != 0) throw Error(ErrorKind::Validation, "grid needs an even point count >= 16");
}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw Error(ErrorKind::Validation, "field size does not match grid");
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void ScalarField::require_same_grid(const ScalarField& o) const {
  if (!(grid_ == o.grid_)) throw Error(ErrorKind::Validation, "fields live on different grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  ScalarField out = a;
  if (!(a.grid() == b.grid())) throw Error(ErrorKind::Validation, "fields live on different grids");
  auto ov = out.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < ov.size(); ++k) ov[k] *= bv[k];
  return out;
}

double VectorField::max_abs() const noexcept {
  return std::max({c[0].max_abs(), c[1].max_abs(), c[2].max_abs()});
}

VectorField operator-(const VectorField& a, const VectorField& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
VectorField operator+(const VectorField& a, const VectorField& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

std::vector<double> graded_time_nodes(double horizon, int intervals, double ratio) {
  if (!(horizon > 0.0)) throw Error(ErrorKind::Validation, "time horizon must be > 0");
  if (intervals < 1) throw Error(ErrorKind::Validation, "need at least one time interval");
  if (!(ratio >= 1.0)) throw Error(ErrorKind::Validation, "grading ratio must be >= 1");
  std::vector<double> widths(static_cast<std::size_t>(intervals));
  double w = 1.0;
  double total = 0.0;
  for (double& x : widths) {
    x = w;
    total += w;
    w *= ratio;
  }
  std::vector<double> nodes{0.0};
  double acc = 0.0;
  for (double x : widths) {
    acc += x;
    nodes.push_back(horizon * acc / total);
  }
  nodes.back() = horizon;
  return nodes;
}

ScalarField sample(const GridSpec& grid, const std::function<double(const Point3&)>& f) {
  ScalarField out(grid);
  auto v = out.values();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid.point(k));
  return out;
}

VectorField sample_vector(const GridSpec& grid, const std::function<Vec3(const Point3&)>& f) {
  VectorField out(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vec3 v = f(grid.point(k));
    out[0][k] = v[0];
    out[1][k] = v[1];
    out[2][k] = v[2];
  }
  return out;
}

double interpolate(const ScalarField& f, const Point3& x) {
  const GridSpec& g = f.grid();
  const double h = g.spacing();
  std::array<int, 3> base{};
  std::array<std::array<double, 4>, 3> w{};
  for (Axis a = 0; a < 3; ++a) {
    const double s = (x[a] + g.half_width) / h - 0.5;
    const double fl = std::floor(s);
    base[static_cast<std::size_t>(a)] = static_cast<int>(fl) - 1;
    const double u = s - fl;  // in [0, 1)
    // Lagrange weights on nodes -1, 0, 1, 2.
    auto& wa = w[static_cast<std::size_t>(a)];
    wa[0] = -u * (u - 1.0) * (u - 2.0) / 6.0;
    wa[1] = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    wa[2] = -(u + 1.0) * u * (u - 2.0) / 2.0;
    wa[3] = (u + 1.0) * u * (u - 1.0) / 6.0;
  }
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    const int i1 = base[0] + a;
    if (i1 < 0 || i1 >= g.n) continue;
    for (int b = 0; b < 4; ++b) {
      const int i2 = base[1] + b;
      if (i2 < 0 || i2 >= g.n) continue;
      const double wab = w[0][static_cast<std::size_t>(a)] * w[1][static_cast<std::size_t>(b)];
      for (int c = 0; c < 4; ++c) {
        const int i3 = base[2] + c;
        if (i3 < 0 || i3 >= g.n) continue;
        acc += wab * w[2][static_cast<std::size_t>(c)] * f.at(i1, i2, i3);
      }
    }
  }
  return acc;
}

}  // namespace reveuler
