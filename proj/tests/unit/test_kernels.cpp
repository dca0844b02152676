#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "reveuler/error.hpp"
#include "reveuler/kernels.hpp"
#include "reveuler/quadrature.hpp"

using namespace reveuler;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const GaussRule& r = gauss_legendre(8);
  double s0 = 0, s14 = 0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k) {
    s0 += r.weights[k];
    s14 += r.weights[k] * std::pow(r.nodes[k], 14);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s14 == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
  const GaussRule c = composite_gauss(0.0, 3.0, 3, 4);
  double s = 0;
  for (std::size_t k = 0; k < c.nodes.size(); ++k) s += c.weights[k] * c.nodes[k] * c.nodes[k];
  CHECK(s == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("gaussian normalisation and symmetry") {
  const KernelSpec unit{1.0 / (4.0 * std::numbers::pi), 0.0, 1.0};
  CHECK(gaussian(unit, {0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  const KernelSpec spec{0.3, 0.0, 0.7};
  const double reach = 10.0 * std::sqrt(spec.nu * spec.t);
  const GaussRule r = composite_gauss(-reach, reach, 4, 16);
  double mass = 0;
  for (std::size_t a = 0; a < r.nodes.size(); ++a)
    for (std::size_t b = 0; b < r.nodes.size(); ++b)
      for (std::size_t c = 0; c < r.nodes.size(); ++c)
        mass += r.weights[a] * r.weights[b] * r.weights[c] * gaussian(spec, {r.nodes[a], r.nodes[b], r.nodes[c]});
  CHECK(std::abs(mass - 1.0) < 1e-8);
  CHECK(gaussian(spec, {0.2, -0.4, 1.0}) == gaussian(spec, {-0.2, 0.4, -1.0}));
}

TEST_CASE("gaussian gradient") {
  const KernelSpec spec{0.5, 0.0, 0.4};
  CHECK(gaussian_grad(spec, {0.0, 0.3, 0.1}, 0) == 0.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 1000; ++k) {
    const Point3 y{u(rng), u(rng), u(rng)};
    for (Axis i = 0; i < 3; ++i) {
      const double a = gaussian_grad(spec, y, i);
      const double b = gaussian_grad(spec, reflect(y, i), i);
      CHECK(std::abs(a + b) <= 1e-15 * std::abs(a));
    }
  }
  const Point3 y{0.3, -0.2, 0.5};
  for (Axis i = 0; i < 3; ++i) {
    const double h = 1e-5;
    Point3 p = y, m = y;
    p[i] += h;
    m[i] -= h;
    const double fd = (gaussian(spec, p) - gaussian(spec, m)) / (2 * h);
    CHECK(gaussian_grad(spec, y, i) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("weighted second moment") {
  for (auto [nu, sigma] : {std::pair{0.1, 1.0}, std::pair{1e-2, 0.3}, std::pair{2.0, 5.0}}) {
    CHECK(std::abs(weighted_second_moment(nu, sigma, 1, false) - 2.0) < 1e-6);
    CHECK(std::abs(weighted_second_moment(nu, sigma, 1, true) - 1.0) < 1e-6);
  }
  const double horizon = 0.5;
  std::vector<double> measured;
  for (double nu : {1e-1, 1e-2, 1e-3}) {
    const MomentReport r = second_moment({nu, 0.0, 1.0}, horizon, 2.0);
    CHECK(r.analytic_M2 == doctest::Approx(horizon / 4));
    CHECK(std::abs(r.measured_M2 - r.analytic_M2) < 1e-6);
    CHECK(r.lipschitz_bound == doctest::Approx(8.0 * r.measured_M2));
    measured.push_back(r.measured_M2);
  }
  CHECK(std::abs(measured[0] - measured[2]) < 1e-6);
  CHECK(second_moment({1.0, 0.0, 1.0}, 0.0).measured_M2 == 0.0);
  CHECK(second_moment({1.0, 0.0, 1.0}, 1e-8).measured_M2 < 1e-8);
}

TEST_CASE("degeneracy scan") {
  const auto probes = probe_lattice(1.0, 3);
  const std::vector<double> nus{1e-1, 5e-2};
  const auto zero = degeneracy_scan([](const Point3&) { return 3.5; }, 1.0, 0, nus, probes);
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
  // Smooth bounded field: f * G_{nu,i} -> d_i f, which does not vanish.
  const auto smooth = degeneracy_scan([](const Point3& x) { return std::tanh(x.x1); }, 1.0, 0, nus, probes);
  CHECK(smooth[0] == doctest::Approx(smooth[1]).epsilon(0.1));
  // For a unit step the exact value at the jump is 1/sqrt(4 pi nu t).
  const auto step = degeneracy_scan([](const Point3& x) { return x.x1 > 0 ? 1.0 : 0.0; }, 1.0, 0, nus,
                                    std::vector<Point3>{{0, 0, 0}});
  CHECK(step[0] == doctest::Approx(1.0 / std::sqrt(4 * std::numbers::pi * 1e-1)).epsilon(1e-6));
}

TEST_CASE("Newtonian kernel gradient") {
  CHECK(newton_kernel_grad({1, 0, 0}, 0) == doctest::Approx(1.0 / (4 * std::numbers::pi)));
  const Point3 x{0.3, -1.1, 0.7};
  for (Axis i = 0; i < 3; ++i) {
    CHECK(newton_kernel_grad({-x.x1, -x.x2, -x.x3}, i) == -newton_kernel_grad(x, i));
    CHECK(newton_kernel_grad(2.0 * x, i) == doctest::Approx(newton_kernel_grad(x, i) / 4));
  }
  double div = 0;
  const double h = 1e-4;
  for (Axis i = 0; i < 3; ++i) {
    Point3 p = x, m = x;
    p[i] += h;
    m[i] -= h;
    div += (newton_kernel_grad(p, i) - newton_kernel_grad(m, i)) / (2 * h);
  }
  CHECK(std::abs(div) < 1e-6 * std::pow(x.norm(), -3));
  CHECK_THROWS_AS(newton_kernel_grad({0, 0, 0}, 1), Error);
}
