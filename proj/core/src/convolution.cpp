#include "reveuler/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reveuler/error.hpp"
#include "reveuler/kernels.hpp"
#include "reveuler/quadrature.hpp"

namespace reveuler {

ScalarField heat_convolve(const ScalarField& f, double nu, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::Validation, "heat_convolve needs t >= 0");
  if (t == 0.0) return f;
  Spectrum s = forward(f);
  apply_heat(s, nu * t);
  return inverse(s);
}

ScalarField heat_grad_convolve(const ScalarField& f, double nu, double t, Axis j) {
  if (t == 0.0) throw Error(ErrorKind::ZeroTime, "derivative kernel undefined at t = 0");
  if (!(t > 0.0)) throw Error(ErrorKind::Validation, "heat_grad_convolve needs t > 0");
  Spectrum s = forward(f);
  apply_heat(s, nu * t);
  apply_derivative(s, j);
  return inverse(s);
}

ScalarField mollify(const ScalarField& f, double eps) {
  if (!(eps >= 0.0)) throw Error(ErrorKind::Validation, "mollifier width must be >= 0");
  if (eps == 0.0) return f;
  Spectrum s = forward(f);
  apply_heat(s, eps);
  return inverse(s);
}

void apply_leray_grad(Spectrum& s, Axis i) {
  const Wavenumbers wn(s.grid);
  for_each_mode(s.grid, [&](std::size_t k, double x1, double x2, double x3, int m1, int m2, int m3) {
    const double k2 = x1 * x1 + x2 * x2 + x3 * x3;
    const double xi = i == 0 ? x1 : (i == 1 ? x2 : x3);
    const int m = i == 0 ? m1 : (i == 1 ? m2 : m3);
    if (k2 == 0.0 || wn.nyquist(m)) {
      s.c[k] = 0.0;
    } else {
      s.c[k] *= Complex(0.0, -xi / k2);
    }
  });
}

ScalarField leray_grad_convolve(const ScalarField& source, Axis i) {
  Spectrum s = forward(source);
  apply_leray_grad(s, i);
  return inverse(s);
}

DuhamelWeights duhamel_weights(double d) {
  DuhamelWeights w{};
  w.decay = std::exp(-d);
  if (d < 1e-3) {
    w.left = 0.5 - d / 3.0 + d * d / 8.0 - d * d * d / 30.0;
    w.right = 0.5 - d / 6.0 + d * d / 24.0 - d * d * d / 120.0;
  } else {
    const double em1 = -std::expm1(-d);  // 1 - e^-d
    const double lf = (em1 - d * w.decay) / (d * d);
    w.left = lf;
    w.right = em1 / d - lf;
  }
  return w;
}

DuhamelAccumulator::DuhamelAccumulator(const GridSpec& grid, double nu) : grid_(grid), nu_(nu), integral_(grid) {
  lambda_.resize(integral_.c.size());
  for_each_mode(grid, [&](std::size_t k, double x1, double x2, double x3, int, int, int) {
    lambda_[k] = nu * (x1 * x1 + x2 * x2 + x3 * x3);
  });
}

void DuhamelAccumulator::push(double t, Spectrum forcing) {
  if (!started_) {
    if (t != 0.0) throw Error(ErrorKind::Validation, "Duhamel integral must start at t = 0");
    started_ = true;
    last_ = std::move(forcing);
    return;
  }
  const double h = t - time_;
  if (!(h > 0.0)) throw Error(ErrorKind::Validation, "Duhamel nodes must ascend");
  for (std::size_t k = 0; k < integral_.c.size(); ++k) {
    const DuhamelWeights w = duhamel_weights(lambda_[k] * h);
    integral_.c[k] = w.decay * integral_.c[k] + h * (w.left * last_.c[k] + w.right * forcing.c[k]);
  }
  last_ = std::move(forcing);
  time_ = t;
}

namespace {

ScalarField interpolate_in_time(const ScalarSlab& slab, double t) {
  auto it = std::upper_bound(slab.times.begin(), slab.times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - slab.times.begin());
  const std::size_t lo = hi - 1;
  const double th = (t - slab.times[lo]) / (slab.times[hi] - slab.times[lo]);
  return (1.0 - th) * slab.fields[lo] + th * slab.fields[hi];
}

ScalarField duhamel_once(const std::vector<double>& times, const std::vector<const ScalarField*>& fields, double nu,
                         std::optional<Axis> deriv) {
  // s runs forward through the nodes; I(t) = int_0^t F(s) G(t - s) ds is the
  // same integral as int_0^t F(t - sigma) G(sigma) d sigma.
  const GridSpec& g = fields.front()->grid();
  DuhamelAccumulator acc(g, nu);
  for (std::size_t k = 0; k < times.size(); ++k) acc.push(times[k], forward(*fields[k]));
  Spectrum out = acc.integral();
  if (deriv) apply_derivative(out, *deriv);
  return inverse(out);
}

}  // namespace

ScalarField spacetime_convolve(const ScalarSlab& slab, double nu, double t, std::optional<Axis> deriv,
                               const SpacetimeOptions& opts) {
  slab.validate();
  if (!(t >= 0.0) || t > slab.times.back() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::InsufficientSlab, "slab does not cover [0, t]");
  }
  const GridSpec& g = slab.fields.front().grid();
  if (t == 0.0) return ScalarField(g);

  std::vector<double> times;
  std::vector<const ScalarField*> fields;
  std::optional<ScalarField> tail;
  for (std::size_t k = 0; k < slab.size() && slab.times[k] < t * (1.0 - 1e-12); ++k) {
    times.push_back(slab.times[k]);
    fields.push_back(&slab.fields[k]);
  }
  const auto match = std::find_if(slab.times.begin(), slab.times.end(),
                                  [&](double s) { return std::abs(s - t) <= 1e-12 * std::max(1.0, t); });
  if (match != slab.times.end()) {
    fields.push_back(&slab.fields[static_cast<std::size_t>(match - slab.times.begin())]);
  } else {
    tail = interpolate_in_time(slab, t);
    fields.push_back(&*tail);
  }
  times.push_back(t);

  ScalarField fine = duhamel_once(times, fields, nu, deriv);
  if (opts.richardson && times.size() >= 3) {
    std::vector<double> ct;
    std::vector<const ScalarField*> cf;
    for (std::size_t k = 0; k < times.size(); k += 2) {
      ct.push_back(times[k]);
      cf.push_back(fields[k]);
    }
    if (ct.back() != times.back()) {
      ct.push_back(times.back());
      cf.push_back(fields.back());
    }
    const ScalarField coarse = duhamel_once(ct, cf, nu, deriv);
    const double scale = fine.max_abs();
    const double diff = (fine - coarse).max_abs();
    if (scale > 0.0 && diff > opts.richardson_tol * scale) {
      throw Error(ErrorKind::InsufficientSlab, "half-resolution Duhamel quadrature disagrees by " +
                                                   std::to_string(diff / scale) + " (relative)");
    }
  }
  return fine;
}

double heat_convolve_direct(const ScalarEvaluator& f, double nu, double t, const Point3& x, std::size_t nodes) {
  const double reach = 10.0 * std::sqrt(nu * t);
  const GaussRule rule = composite_gauss(-reach, reach, 2, nodes);
  const KernelSpec spec{nu, 0.0, t};
  const std::size_t n = rule.nodes.size();
  // The kernel is separable; accumulate with the 1D factors.
  std::vector<double> g1(n);
  const double s = 4.0 * nu * t;
  for (std::size_t k = 0; k < n; ++k) {
    g1[k] = rule.weights[k] * std::exp(-rule.nodes[k] * rule.nodes[k] / s) / std::sqrt(std::numbers::pi * s);
  }
  double acc = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double wab = g1[a] * g1[b];
      for (std::size_t c = 0; c < n; ++c) {
        acc += wab * g1[c] * f(x - Point3{rule.nodes[a], rule.nodes[b], rule.nodes[c]});
      }
    }
  }
  (void)spec;
  return acc;
}

ScalarField heat_convolve_direct(const ScalarField& f, double nu, double t) {
  if (t == 0.0) return f;
  const GridSpec& g = f.grid();
  const int n = g.n;
  const double h = g.spacing();
  const double s = 4.0 * nu * t;
  // 1D kernel on index offsets, free space (no wrap-around).
  std::vector<double> k1(static_cast<std::size_t>(2 * n - 1));
  for (int d = -(n - 1); d <= n - 1; ++d) {
    const double y = d * h;
    k1[static_cast<std::size_t>(d + n - 1)] = h * std::exp(-y * y / s) / std::sqrt(std::numbers::pi * s);
  }
  ScalarField cur = f;
  for (Axis axis = 0; axis < 3; ++axis) {
    ScalarField next(g);
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2) {
        for (int i3 = 0; i3 < n; ++i3) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j) {
            const int src1 = axis == 0 ? j : i1;
            const int src2 = axis == 1 ? j : i2;
            const int src3 = axis == 2 ? j : i3;
            const int tgt = axis == 0 ? i1 : (axis == 1 ? i2 : i3);
            acc += k1[static_cast<std::size_t>(tgt - j + n - 1)] * cur.at(src1, src2, src3);
          }
          next.at(i1, i2, i3) = acc;
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Vec3 leray_grad_direct(const ScalarEvaluator& source, const Point3& x, double box_half_width,
                       const LerayQuadrature& q) {
  double radius = q.radius;
  if (radius <= 0.0) {
    for (int corner = 0; corner < 8; ++corner) {
      const Point3 c{(corner & 1) ? box_half_width : -box_half_width, (corner & 2) ? box_half_width : -box_half_width,
                     (corner & 4) ? box_half_width : -box_half_width};
      radius = std::max(radius, (c - x).norm());
    }
  }
  const GaussRule radial = composite_gauss(0.0, radius, q.radial_panels, q.radial_nodes);
  const GaussRule& polar = gauss_legendre(q.polar_nodes);
  Vec3 acc{0.0, 0.0, 0.0};
  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(q.azimuth_nodes);
  for (std::size_t a = 0; a < polar.nodes.size(); ++a) {
    const double ct = polar.nodes[a];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (std::size_t b = 0; b < q.azimuth_nodes; ++b) {
      const double phi = dphi * (static_cast<double>(b) + 0.5);
      const Point3 dir{st * std::cos(phi), st * std::sin(phi), ct};
      double line = 0.0;
      for (std::size_t r = 0; r < radial.nodes.size(); ++r) line += radial.weights[r] * source(x - radial.nodes[r] * dir);
      const double w = polar.weights[a] * dphi * line / (4.0 * std::numbers::pi);
      acc[0] += w * dir.x1;
      acc[1] += w * dir.x2;
      acc[2] += w * dir.x3;
    }
  }
  return acc;
}

}  // namespace reveuler
