#include "reveuler/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "reveuler/error.hpp"
#include "reveuler/kernels.hpp"
#include "reveuler/quadrature.hpp"
#include "reveuler/spectral.hpp"

namespace reveuler {

VectorField vorticity(const VectorField& v) {
  VectorField w;
  w.c[0] = spectral_derivative(v.c[2], 1) - spectral_derivative(v.c[1], 2);
  w.c[1] = spectral_derivative(v.c[0], 2) - spectral_derivative(v.c[2], 0);
  w.c[2] = spectral_derivative(v.c[1], 0) - spectral_derivative(v.c[0], 1);
  return w;
}

double lipschitz_estimate(const ScalarSlab& slab, const HolderPairs& pairs) {
  if (slab.fields.size() < 2) throw Error(ErrorKind::Validation, "Lipschitz estimate needs >= 2 time nodes");
  double out = 0.0;
  for (const auto& f : slab.fields) {
    out = std::max(out, holder_seminorm(f, 1.0, Box::cube(f.grid().half_width), pairs));
  }
  return out;
}

double holder_exponent_estimate(const ScalarField& f, Axis axis) {
  const GridSpec& g = f.grid();
  std::vector<double> gaps, diffs;
  for (int m = std::max(1, g.n / 16); 2 * m <= g.n / 2; m *= 2) {
    double worst = 0.0;
    for (int lo = g.n / 2 - m; lo < g.n / 2; ++lo) {
      const int hi = lo + m;
      for (int a = 0; a < g.n; ++a) {
        for (int b = 0; b < g.n; ++b) {
          double u = 0.0, w = 0.0;
          if (axis == 0) {
            u = f.at(lo, a, b);
            w = f.at(hi, a, b);
          } else if (axis == 1) {
            u = f.at(a, lo, b);
            w = f.at(a, hi, b);
          } else {
            u = f.at(a, b, lo);
            w = f.at(a, b, hi);
          }
          worst = std::max(worst, std::abs(w - u));
        }
      }
    }
    gaps.push_back(m * g.spacing());
    diffs.push_back(worst);
    if (gaps.size() == 3) break;
  }
  if (std::all_of(diffs.begin(), diffs.end(), [](double d) { return d == 0.0; })) return 1.0;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    if (diffs[k] > 0.0) {
      lx.push_back(std::log(gaps[k]));
      ly.push_back(std::log(diffs[k]));
    }
  }
  if (lx.size() < 2) return 1.0;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k] / n;
    my += ly[k] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  return sxy / sxx;
}

std::string to_string(Trend t) { return t == Trend::Growing ? "growing" : "bounded"; }

SlabFields slab_fields(const VectorField& v) {
  const GridSpec& g = v.grid();
  std::array<std::array<ScalarField, 3>, 3> d;
  for (std::size_t i = 0; i < 3; ++i) {
    const Spectrum s = forward(v.c[i]);
    for (Axis j = 0; j < 3; ++j) {
      Spectrum dj = s;
      apply_derivative(dj, j);
      d[i][static_cast<std::size_t>(j)] = inverse(dj);
    }
  }
  SlabFields out{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
  for (std::size_t k = 0; k < g.size(); ++k) {
    out.omega1[k] = std::abs(d[2][1][k] - d[1][2][k]);
    out.grad_v2[k] = std::sqrt(d[1][0][k] * d[1][0][k] + d[1][1][k] * d[1][1][k] + d[1][2][k] * d[1][2][k]);
    out.grad_v3[k] = std::sqrt(d[2][0][k] * d[2][0][k] + d[2][1][k] * d[2][1][k] + d[2][2][k] * d[2][2][k]);
    out.v1[k] = std::abs(v.c[0][k]);
  }
  return out;
}

SlabFields slab_fields(const GridSpec& g, const Params& p) {
  SlabFields out{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point3 x = g.point(k);
    if (x.x1 == 0.0) continue;
    const Mat3 m = eval_grad_h(x, p);
    out.omega1[k] = std::abs(m[2][1] - m[1][2]);
    out.grad_v2[k] = std::sqrt(m[1][0] * m[1][0] + m[1][1] * m[1][1] + m[1][2] * m[1][2]);
    out.grad_v3[k] = std::sqrt(m[2][0] * m[2][0] + m[2][1] * m[2][1] + m[2][2] * m[2][2]);
    out.v1[k] = std::abs(eval_h(x, p)[0]);
  }
  return out;
}

std::vector<double> default_slab_radii(const GridSpec& g) {
  std::vector<double> radii;
  const double h = g.spacing();
  for (double r = 0.5 * g.half_width; r >= 1.5 * h; r *= 0.5) radii.push_back(r);
  return radii;
}

namespace {

// Fit over the innermost kSlabFitRadii shells only.
double loglog_slope(const std::vector<double>& r, const std::vector<double>& s) {
  std::vector<double> lx, ly;
  const std::size_t first = r.size() > kSlabFitRadii ? r.size() - kSlabFitRadii : 0;
  for (std::size_t k = first; k < r.size(); ++k) {
    if (s[k] > 0.0) {
      lx.push_back(std::log(r[k]));
      ly.push_back(std::log(s[k]));
    }
  }
  if (lx.size() < 2) return 0.0;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k] / n;
    my += ly[k] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  return sxy / sxx;
}

Trend classify(double slope) { return slope < kGrowthSlope ? Trend::Growing : Trend::Bounded; }

bool in_shell(double x1, double r) { return std::abs(x1) > 0.5 * r && std::abs(x1) <= r; }

SlabQuantityTrend trend_of(const ScalarField& f, const std::vector<double>& radii,
                           const std::vector<std::pair<int, int>>& lines, const std::vector<double>& sups) {
  SlabQuantityTrend out;
  out.slope = loglog_slope(radii, sups);
  out.trend = classify(out.slope);
  const GridSpec& g = f.grid();
  out.uniform = true;
  for (const auto& [i2, i3] : lines) {
    std::vector<double> s(radii.size(), 0.0);
    for (std::size_t k = 0; k < radii.size(); ++k) {
      for (int i1 = 0; i1 < g.n; ++i1) {
        if (in_shell(g.coordinate(i1), radii[k])) s[k] = std::max(s[k], f.at(i1, i2, i3));
      }
    }
    const double slope = loglog_slope(radii, s);
    out.line_slopes.push_back(slope);
    out.uniform = out.uniform && classify(slope) == out.trend;
  }
  return out;
}

}  // namespace

SlabProfile singular_slab_scan(const SlabFields& f, const std::vector<double>& radii, int lines, std::uint64_t seed) {
  const GridSpec& g = f.omega1.grid();
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (!(radii[k] < radii[k - 1])) throw Error(ErrorKind::Validation, "slab radii must descend");
  }
  if (radii.empty() || radii.front() > g.half_width) throw Error(ErrorKind::Validation, "slab radii outside the grid");
  SlabProfile prof;
  for (double r : radii) {
    SlabRow row;
    row.r = r;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Point3 x = g.point(k);
      if (!in_shell(x.x1, r)) continue;
      row.sup_omega1 = std::max(row.sup_omega1, f.omega1[k]);
      row.sup_grad_v2 = std::max(row.sup_grad_v2, f.grad_v2[k]);
      row.sup_grad_v3 = std::max(row.sup_grad_v3, f.grad_v3[k]);
      row.sup_v1 = std::max(row.sup_v1, f.v1[k]);
    }
    prof.rows.push_back(row);
  }
  // (x2, x3) lines away from the zero sets of the weights.
  std::mt19937_64 rng(seed);
  std::vector<int> admissible;
  for (int i = 0; i < g.n; ++i) {
    const double x = std::abs(g.coordinate(i));
    if (x >= 0.3 && x <= 2.5) admissible.push_back(i);
  }
  if (admissible.empty()) throw Error(ErrorKind::Validation, "grid too coarse for line sampling");
  std::uniform_int_distribution<std::size_t> pick(0, admissible.size() - 1);
  std::vector<std::pair<int, int>> idx;
  for (int k = 0; k < lines; ++k) {
    const int i2 = admissible[pick(rng)];
    const int i3 = admissible[pick(rng)];
    idx.emplace_back(i2, i3);
    prof.lines.emplace_back(g.coordinate(i2), g.coordinate(i3));
  }
  auto column = [&](double SlabRow::*m) {
    std::vector<double> s;
    for (const auto& row : prof.rows) s.push_back(row.*m);
    return s;
  };
  prof.omega1 = trend_of(f.omega1, radii, idx, column(&SlabRow::sup_omega1));
  prof.grad_v2 = trend_of(f.grad_v2, radii, idx, column(&SlabRow::sup_grad_v2));
  prof.grad_v3 = trend_of(f.grad_v3, radii, idx, column(&SlabRow::sup_grad_v3));
  prof.v1 = trend_of(f.v1, radii, idx, column(&SlabRow::sup_v1));
  return prof;
}

double compactify_check(const ScalarField& f, int m) {
  if (m < 0 || m > 2) throw Error(ErrorKind::Validation, "compactified derivatives supported up to order 2");
  const GridSpec& g = f.grid();
  const double R = g.half_width;
  if (f.max_abs() == 0.0) return 0.0;
  {
    const std::vector<double> radii{0.25 * R, 0.375 * R, 0.5 * R, 0.75 * R};
    if (radii.front() < 1.0) throw Error(ErrorKind::Validation, "box too small for a decay certificate");
    const DecayCertificate cert =
        certify_decay([&](const Point3& x) { return interpolate(f, x); }, 2 * m, 0, radii);
    if (!cert.holds) {
      throw Error(ErrorKind::CertificateMissing, "decay order " + std::to_string(cert.fitted_exponent) +
                                                     " below the required " + std::to_string(2 * m));
    }
  }
  const int n = g.n;
  const double Y = std::atan(R - 0.5 * g.spacing());
  const double hy = 2.0 * Y / n;
  auto ycoord = [&](int i) { return -Y + (i + 0.5) * hy; };
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = std::tan(ycoord(i));
  ScalarField c(g);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int d = 0; d < n; ++d) {
        c.at(a, b, d) = interpolate(f, {xs[static_cast<std::size_t>(a)], xs[static_cast<std::size_t>(b)],
                                        xs[static_cast<std::size_t>(d)]});
      }
    }
  }
  double out = c.max_abs();
  if (m == 0) return out;
  // Central differences in y, interior points only.
  auto val = [&](int a, int b, int d) { return c.at(a, b, d); };
  for (int a = 1; a < n - 1; ++a) {
    for (int b = 1; b < n - 1; ++b) {
      for (int d = 1; d < n - 1; ++d) {
        const std::array<int, 3> p{a, b, d};
        std::array<double, 3> first{};
        for (int ax = 0; ax < 3; ++ax) {
          auto q = p;
          auto r = p;
          q[static_cast<std::size_t>(ax)] += 1;
          r[static_cast<std::size_t>(ax)] -= 1;
          first[static_cast<std::size_t>(ax)] = (val(q[0], q[1], q[2]) - val(r[0], r[1], r[2])) / (2.0 * hy);
          out = std::max(out, std::abs(first[static_cast<std::size_t>(ax)]));
        }
        if (m < 2) continue;
        for (int ax = 0; ax < 3; ++ax) {
          for (int bx = ax; bx < 3; ++bx) {
            double dd = 0.0;
            if (ax == bx) {
              auto q = p;
              auto r = p;
              q[static_cast<std::size_t>(ax)] += 1;
              r[static_cast<std::size_t>(ax)] -= 1;
              dd = (val(q[0], q[1], q[2]) - 2.0 * val(a, b, d) + val(r[0], r[1], r[2])) / (hy * hy);
            } else {
              double acc = 0.0;
              for (int sa : {-1, 1}) {
                for (int sb : {-1, 1}) {
                  auto q = p;
                  q[static_cast<std::size_t>(ax)] += sa;
                  q[static_cast<std::size_t>(bx)] += sb;
                  acc += sa * sb * val(q[0], q[1], q[2]);
                }
              }
              dd = acc / (4.0 * hy * hy);
            }
            out = std::max(out, std::abs(dd));
          }
        }
      }
    }
  }
  return out;
}

double compactify_check(const VectorField& v, int m) {
  double out = 0.0;
  for (const auto& c : v.c) out = std::max(out, compactify_check(c, m));
  return out;
}

namespace {

// Smooth partition: 1 below a, 0 above b.
double cutoff(double rho, double a, double b) {
  if (rho <= a) return 1.0;
  if (rho >= b) return 0.0;
  const double u = (rho - a) / (b - a);
  const double p = std::exp(-1.0 / u);
  const double q = std::exp(-1.0 / (1.0 - u));
  return q / (p + q);
}

}  // namespace

Vec3 leray_grad_quadrature(const ScalarField& source, const Point3& x, double near_cells) {
  const GridSpec& g = source.grid();
  const double h = g.spacing();
  const double r0 = near_cells * h;
  const double a = 0.5 * r0;
  Vec3 out{0.0, 0.0, 0.0};

  // Near field: (1/4pi) int omega_i int chi(rho) S(x - rho omega) d rho d omega.
  const GaussRule radial = composite_gauss(0.0, r0, 4, 8);
  const GaussRule& polar = gauss_legendre(24);
  const std::size_t azimuth = 48;
  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(azimuth);
  for (std::size_t ip = 0; ip < polar.nodes.size(); ++ip) {
    const double ct = polar.nodes[ip];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (std::size_t ia = 0; ia < azimuth; ++ia) {
      const double phi = dphi * (static_cast<double>(ia) + 0.5);
      const Point3 dir{st * std::cos(phi), st * std::sin(phi), ct};
      double line = 0.0;
      for (std::size_t ir = 0; ir < radial.nodes.size(); ++ir) {
        const double rho = radial.nodes[ir];
        line += radial.weights[ir] * cutoff(rho, a, r0) * interpolate(source, x - rho * dir);
      }
      const double w = polar.weights[ip] * dphi * line / (4.0 * std::numbers::pi);
      out[0] += w * dir.x1;
      out[1] += w * dir.x2;
      out[2] += w * dir.x3;
    }
  }

  // Far field: cell sum of (1 - chi) K_{,i}(x - y) S(y) dV.
  const double dv = g.cell_volume();
  double f0 = 0.0, f1 = 0.0, f2 = 0.0;
#pragma omp parallel for reduction(+ : f0, f1, f2) schedule(static)
  for (int i1 = 0; i1 < g.n; ++i1) {
    const double z1 = x.x1 - g.coordinate(i1);
    for (int i2 = 0; i2 < g.n; ++i2) {
      const double z2 = x.x2 - g.coordinate(i2);
      for (int i3 = 0; i3 < g.n; ++i3) {
        const double z3 = x.x3 - g.coordinate(i3);
        const double r2 = z1 * z1 + z2 * z2 + z3 * z3;
        const double r = std::sqrt(r2);
        if (r <= a) continue;
        const double w = (1.0 - cutoff(r, a, r0)) * source.at(i1, i2, i3) * dv / (4.0 * std::numbers::pi * r2 * r);
        f0 += w * z1;
        f1 += w * z2;
        f2 += w * z3;
      }
    }
  }
  out[0] += f0;
  out[1] += f1;
  out[2] += f2;
  return out;
}

ScalarField pressure_source(const VectorField& v) {
  const GridSpec& g = v.grid();
  std::array<std::array<ScalarField, 3>, 3> d;
  for (std::size_t i = 0; i < 3; ++i) {
    const Spectrum s = forward(v.c[i]);
    for (Axis j = 0; j < 3; ++j) {
      Spectrum dj = s;
      apply_derivative(dj, j);
      d[i][static_cast<std::size_t>(j)] = inverse(dj);
    }
  }
  ScalarField out(g);
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t j = 0; j < 3; ++j) out += multiply(d[m][j], d[j][m]);
  }
  return out;
}

double reversed_euler_residual(const VectorSlab& slab, const std::vector<Point3>& probes,
                               const ResidualOptions& opts) {
  slab.validate();
  if (slab.size() < 3) throw Error(ErrorKind::Validation, "residual needs >= 3 time nodes");
  const int last = static_cast<int>(slab.size()) - 1;
  const int n = opts.node < 0 ? last - 1 : opts.node;
  if (n < 1 || n >= last) throw Error(ErrorKind::Validation, "residual node must be interior");
  const auto un = static_cast<std::size_t>(n);
  const double h1 = slab.times[un] - slab.times[un - 1];
  const double h2 = slab.times[un + 1] - slab.times[un];
  const double cm = -h2 / (h1 * (h1 + h2));
  const double c0 = (h2 - h1) / (h1 * h2);
  const double cp = h1 / (h2 * (h1 + h2));
  const VectorField& v = slab.fields[un];
  const GridSpec& g = v.grid();
  const double sign = opts.direction == TimeDirection::Reversed ? -1.0 : 1.0;

  std::array<ScalarField, 3> dt;
  std::array<ScalarField, 3> adv;
  for (std::size_t i = 0; i < 3; ++i) {
    dt[i] = cm * slab.fields[un - 1].c[i] + c0 * v.c[i] + cp * slab.fields[un + 1].c[i];
    adv[i] = ScalarField(g);
    const Spectrum s = forward(v.c[i]);
    for (Axis j = 0; j < 3; ++j) {
      Spectrum dj = s;
      apply_derivative(dj, j);
      adv[i] += multiply(v.c[static_cast<std::size_t>(j)], inverse(dj));
    }
  }
  std::optional<ScalarField> source;
  if (!opts.pressure_gradient) source = spectral_upsample(pressure_source(v), 2);

  double worst = 0.0;
  for (const Point3& x : probes) {
    Vec3 gp{};
    if (opts.pressure_gradient) {
      gp = opts.pressure_gradient(x, slab.times[un]);
    } else {
      const Vec3 k = leray_grad_quadrature(*source, x, opts.near_cells);
      for (std::size_t i = 0; i < 3; ++i) gp[i] = -k[i];
    }
    for (std::size_t i = 0; i < 3; ++i) {
      const double r = interpolate(dt[i], x) + sign * (interpolate(adv[i], x) + gp[i]);
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

std::vector<Point3> residual_probes(double half, int per_axis, double min_x1) {
  std::vector<Point3> out;
  for (const Point3& p : probe_lattice(half, per_axis)) {
    if (std::abs(p.x1) >= min_x1) out.push_back(p);
  }
  return out;
}

}  // namespace reveuler
