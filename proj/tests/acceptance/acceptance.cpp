// One criterion per invocation: `acceptance_runner N` prints a PASS/FAIL line
// and exits 0 on pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "reveuler/convolution.hpp"
#include "reveuler/diagnostics.hpp"
#include "reveuler/error.hpp"
#include "reveuler/iteration.hpp"
#include "reveuler/kernels.hpp"
#include "reveuler/parallel.hpp"
#include "reveuler/spectral.hpp"

using namespace reveuler;

namespace {

// Shared horizon of the viscosity-limit criteria (5, 7, 8, 10).
constexpr double kLimitHorizon = 0.1;
const std::vector<double> kSchedule{1e-1, 5e-2, 2.5e-2};

struct Verdict {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    lines.push_back(std::string(ok ? "  ok   " : "  FAIL ") + buf);
    pass = pass && ok;
  }
  void note(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    lines.push_back(std::string("       ") + buf);
  }
};

double fd4(const std::function<double(const Point3&)>& f, Point3 x, Axis j, double h) {
  auto at = [&](double s) {
    Point3 y = x;
    y[j] += s;
    return f(y);
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

Params radial_params() {
  Params p;
  p.family = Family::Radial;
  return p;
}

IterationConfig limit_config(int n) {
  IterationConfig cfg;
  cfg.grid = GridSpec{8.0, n};
  cfg.T = kLimitHorizon;
  cfg.kmax = 4;
  return cfg;
}

void divergence(Verdict& v) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const Params p;
  double worst = 0.0;
  int count = 0;
  while (count < 10000) {
    const Point3 x{u(rng), u(rng), u(rng)};
    if (std::abs(x.x1) <= 1e-3) continue;
    worst = std::max(worst, std::abs(divergence_h(x, p)));
    ++count;
  }
  v.check(worst < 1e-9, "max |div h| over 10^4 points with |x1| > 1e-3 = %.3e (< 1e-9)", worst);
}

void gradients(Verdict& v) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (const Params& p : {Params{}, radial_params()}) {
    double worst = 0.0;
    for (int k = 0; k < 1000;) {
      const Point3 x{u(rng), u(rng), u(rng)};
      if (std::abs(x.x1) <= 1e-3) continue;
      ++k;
      const Mat3 m = eval_grad_data(x, p);
      const double step = 1e-3 * std::min(1.0, std::abs(x.x1));
      for (int i = 0; i < 3; ++i) {
        for (Axis j = 0; j < 3; ++j) {
          const auto ui = static_cast<std::size_t>(i);
          const auto uj = static_cast<std::size_t>(j);
          const double fd = fd4([&](const Point3& y) { return eval_data(y, p)[ui]; }, x, j, step);
          worst = std::max(worst, std::abs(fd - m[ui][uj]) / std::max(std::abs(m[ui][uj]), 1e-6));
        }
      }
    }
    v.check(worst < 1e-5, "%s: max relative Jacobian error vs 4th-order FD at 10^3 points = %.3e (< 1e-5)",
            to_string(p.family).c_str(), worst);
  }
}

void kernel_facts(Verdict& v) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const KernelSpec spec{0.1, 0.0, 1.0};
  double anti = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Point3 y{u(rng), u(rng), u(rng)};
    for (Axis i = 0; i < 3; ++i) {
      const double g = gaussian_grad(spec, y, i);
      if (g != 0.0) anti = std::max(anti, std::abs(g + gaussian_grad(spec, reflect(y, i), i)) / std::abs(g));
    }
  }
  v.check(anti <= 1e-15, "(a) antisymmetry of the kernel gradient, max relative defect = %.3e (<= 1e-15)", anti);
  for (const auto& [nu, sigma] : std::vector<std::pair<double, double>>{{1e-1, 0.5}, {1e-2, 1.0}, {1e-3, 2.0}}) {
    const double m = weighted_second_moment(nu, sigma, 0, false);
    v.check(std::abs(m - 2.0) < 1e-6, "(b) weighted second moment nu=%g sigma=%g: %.12f (2 within 1e-6)", nu, sigma, m);
  }
  const std::vector<double> nus{1e-1, 1e-2, 1e-3, 1e-4};
  const auto scan = degeneracy_scan([](const Point3& x) { return x.x1 > 0 ? 1.0 : 0.0; }, 1.0, 0, nus,
                                    probe_lattice(1.0, 3));
  bool decreasing = true;
  for (std::size_t k = 1; k < scan.size(); ++k) decreasing = decreasing && scan[k] < scan[k - 1];
  v.check(decreasing, "(c) degeneracy scan of a unit step in x1, nu = 1e-1..1e-4: %.4g %.4g %.4g %.4g (strictly decreasing)",
          scan[0], scan[1], scan[2], scan[3]);
}

void convolution_engine(Verdict& v) {
  const GridSpec g{8.0, 64};
  auto bump = [](const Point3& x) { return std::exp(-x.norm2()); };
  const ScalarField spec = heat_convolve(sample(g, bump), 0.1, 1.0);
  double worst = 0.0;
  for (int a = 0; a < 64; a += 4) {
    for (int b = 0; b < 64; b += 4) {
      for (int c = 0; c < 64; c += 4) {
        const Point3 x{g.coordinate(a), g.coordinate(b), g.coordinate(c)};
        worst = std::max(worst, std::abs(spec.at(a, b, c) - heat_convolve_direct(bump, 0.1, 1.0, x)));
      }
    }
  }
  v.check(worst < 1e-4, "spectral heat convolution (64^3) vs direct quadrature on 16^3 points: %.3e (< 1e-4)", worst);
  const ScalarField src = sample(g, [](const Point3& x) { return (4 * x.norm2() - 6) * std::exp(-x.norm2()); });
  double leray = 0.0;
  for (Axis i = 0; i < 3; ++i) {
    const ScalarField exact = sample(g, [&](const Point3& x) { return -2 * x[i] * std::exp(-x.norm2()); });
    leray = std::max(leray, (leray_grad_convolve(src, i) - exact).max_abs());
  }
  v.check(leray < 1e-5, "manufactured Leray inversion at 64^3: %.3e (< 1e-5)", leray);
}

// max over nodes >= 1, components and the inner half box of
// |d_j dv_i| / ((1 + |x1|^{2 beta0 - 3}) prod (1 + x_k^2)^-2).
double first_increment_profile(double nu) {
  IterationConfig cfg = limit_config(64);
  cfg.nu = nu;
  cfg.eps = nu;
  cfg.kmax = 2;  // only the first update is taken
  const IterationState st = step(init_step0(cfg), cfg);
  const GridSpec& g = st.grid();
  const double e = cfg.params.holder_delta();
  const double inner = 0.5 * g.half_width;
  double worst = 0.0;
  for (std::size_t n = 1; n < st.nodes(); ++n) {
    const VectorField inc = increment(st, n);
    for (std::size_t i = 0; i < 3; ++i) {
      for (Axis j = 0; j < 3; ++j) {
        const ScalarField d = spectral_derivative(inc.c[i], j);
        for (std::size_t k = 0; k < g.size(); ++k) {
          const Point3 x = g.point(k);
          if (std::abs(x.x1) > inner || std::abs(x.x2) > inner || std::abs(x.x3) > inner) continue;
          double w = 1.0 + std::pow(std::abs(x.x1), e);
          for (Axis a = 0; a < 3; ++a) w /= (1 + x[a] * x[a]) * (1 + x[a] * x[a]);
          worst = std::max(worst, std::abs(d[k]) / w);
        }
      }
    }
  }
  return worst;
}

void increment_profile_bound(Verdict& v) {
  const double C = first_increment_profile(1e-1);
  v.note("C fitted at nu = eps = 1e-1: %.6e", C);
  for (double nu : {1e-2, 1e-3}) {
    const double m = first_increment_profile(nu);
    v.check(m <= 1.1 * C, "nu = eps = %g: max |d dv| / profile = %.6e, ratio to C %.4f (<= 1.1)", nu, m, m / C);
  }
}

void contraction(Verdict& v) {
  IterationConfig cfg;
  cfg.grid = GridSpec{8.0, 64};
  cfg.kmax = 4;
  try {
    const ContractionResult r = run_contraction(cfg);
    for (const auto& t : r.trials) {
      v.note("trial T=%.5g max ratio %.4g Richardson %.3g %s", t.T, t.max_ratio, t.richardson_rel,
             t.contracting ? "contracting" : t.note.c_str());
    }
    double worst = 0.0;
    int ratios = 0;
    for (const auto& rec : r.records) {
      if (rec.contraction_ratio) {
        worst = std::max(worst, *rec.contraction_ratio);
        ++ratios;
      }
    }
    v.check(r.T_measured > 0.0, "T_measured = %.6g (> 0)", r.T_measured);
    v.check(ratios >= 1 && worst <= 0.5, "%d ratios at T_measured, max %.4g (<= 0.5)", ratios, worst);
  } catch (const Error& e) {
    v.check(false, "%s", e.what());
  }
}

void cauchy(Verdict& v) {
  const LimitResult lim = viscosity_limit_drive(limit_config(64), kSchedule, kSchedule);
  for (const auto& row : lim.rows) {
    v.note("nu=eps=%g sup|dv(T)| %.6e diff to previous %s", row.nu, row.sup_incr,
           row.diff_to_previous ? std::to_string(*row.diff_to_previous).c_str() : "-");
  }
  const double d1 = *lim.rows[1].diff_to_previous;
  const double d2 = *lim.rows[2].diff_to_previous;
  v.check(d2 < d1, "successive increment differences %.6e -> %.6e (strictly decreasing)", d1, d2);
}

void residual(Verdict& v) {
  const std::vector<int> grids{48, 64, 96};
  const double collar = 5.0 * 16.0 / 48.0;
  const auto probes = residual_probes(3.0, 6, collar);
  std::vector<double> res;
  for (int n : grids) {
    IterationConfig cfg = limit_config(n);
    cfg.nu = kSchedule.back();
    cfg.eps = kSchedule.back();
    res.push_back(reversed_euler_residual(iterate(cfg).v, probes));
    v.note("limit candidate n=%d: residual %.6e on %zu probes with |x1| >= %.3f", n, res.back(), probes.size(), collar);
  }
  v.check(res[1] < res[0] && res[2] < res[1], "residual trend %.4e -> %.4e -> %.4e (decreasing)", res[0], res[1], res[2]);

  const GridSpec g{8.0, 64};
  const VectorField sw = sample_vector(g, [](const Point3& x) {
    const double w = std::exp(-(x.x1 * x.x1 + x.x2 * x.x2));
    return Vec3{x.x2 * w, -x.x1 * w, 0.0};
  });
  VectorSlab slab{{0.0, 0.05, 0.1}, {sw, sw, sw}};
  ResidualOptions opts;
  opts.pressure_gradient = [](const Point3& x, double) {
    const double w = std::exp(-2.0 * (x.x1 * x.x1 + x.x2 * x.x2));
    return Vec3{x.x1 * w, x.x2 * w, 0.0};
  };
  const double m = reversed_euler_residual(slab, residual_probes(3.0, 6, 5 * g.spacing()), opts);
  v.check(m < 1e-3, "manufactured windowed rotation at 64^3: residual %.3e (< 1e-3)", m);
}

void singular_signature(Verdict& v) {
  const GridSpec g{2.0, 128};
  const SlabProfile p = singular_slab_scan(slab_fields(g, Params{}), default_slab_radii(g), 8, 7);
  for (const auto& r : p.rows) {
    v.note("r=%.5f  sup|w1| %.4e  sup|grad v2| %.4e  sup|grad v3| %.4e  sup|v1| %.4e", r.r, r.sup_omega1,
           r.sup_grad_v2, r.sup_grad_v3, r.sup_v1);
  }
  auto uniform = [](const SlabQuantityTrend& t) { return t.uniform && t.line_slopes.size() >= 8; };
  v.check(p.omega1.trend == Trend::Growing && uniform(p.omega1), "sup|w1|: slope %.3f, %s, uniform over lines: %s",
          p.omega1.slope, to_string(p.omega1.trend).c_str(), uniform(p.omega1) ? "yes" : "no");
  v.check(p.grad_v2.trend == Trend::Growing && uniform(p.grad_v2), "|grad v2|: slope %.3f, %s, uniform over lines: %s",
          p.grad_v2.slope, to_string(p.grad_v2.trend).c_str(), uniform(p.grad_v2) ? "yes" : "no");
  v.check(p.grad_v3.trend == Trend::Growing && uniform(p.grad_v3), "|grad v3|: slope %.3f, %s, uniform over lines: %s",
          p.grad_v3.slope, to_string(p.grad_v3.trend).c_str(), uniform(p.grad_v3) ? "yes" : "no");
  v.check(p.v1.trend == Trend::Bounded, "sup|v1|: slope %.3f, %s", p.v1.slope, to_string(p.v1.trend).c_str());
}

void compactified(Verdict& v) {
  const LimitResult lim = viscosity_limit_drive(limit_config(64), kSchedule, kSchedule);
  std::vector<double> c;
  for (std::size_t m = 0; m < lim.increments_at_T.size(); ++m) {
    try {
      c.push_back(compactify_check(lim.increments_at_T[m], 1));
      v.note("nu=eps=%g: compactified sup (m = 1) %.6e", kSchedule[m], c.back());
    } catch (const Error& e) {
      v.check(false, "nu=eps=%g: %s", kSchedule[m], e.what());
      return;
    }
  }
  const double hi = *std::max_element(c.begin(), c.end());
  const double lo = *std::min_element(c.begin(), c.end());
  v.check(std::isfinite(hi), "compactified sup finite: %.6e", hi);
  v.check((hi - lo) / hi <= 0.1, "relative spread across the schedule %.4f (<= 0.1)", (hi - lo) / hi);
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<void(Verdict&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, Criterion> criteria{
      {1, {"divergence identity", 5, divergence}},
      {2, {"gradient correctness", 5, gradients}},
      {3, {"kernel facts", 30, kernel_facts}},
      {4, {"convolution engine", 120, convolution_engine}},
      {5, {"first-increment profile bound", 600, increment_profile_bound}},
      {6, {"contraction", 900, contraction}},
      {7, {"Cauchy trend", 1200, cauchy}},
      {8, {"residual trend", 1200, residual}},
      {9, {"singularity signature", 300, singular_signature}},
      {10, {"compactified bound", 300, compactified}},
  };
  if (argc != 2 || !criteria.contains(std::atoi(argv[1]))) {
    std::fprintf(stderr, "usage: %s <criterion 1-10>\n", argv[0]);
    return 2;
  }
  configure_parallelism();
  const int id = std::atoi(argv[1]);
  const Criterion& c = criteria.at(id);
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.run(v);
  } catch (const std::exception& e) {
    v.check(false, "unexpected error: %s", e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.check(secs < c.budget_s, "runtime %.1f s (< %.0f s)", secs, c.budget_s);
  for (const auto& l : v.lines) std::printf("%s\n", l.c_str());
  std::printf("acceptance %d (%s): %s\n", id, c.name, v.pass ? "PASS" : "FAIL");
  return v.pass ? 0 : 1;
}
