#include <cmath>
#include <numbers>

#include "doctest.h"
#include "reveuler/error.hpp"
#include "reveuler/grid.hpp"
#include "reveuler/spectral.hpp"

using namespace reveuler;

TEST_CASE("grid layout") {
  const GridSpec g{4.0, 16};
  CHECK(g.spacing() == 0.5);
  CHECK(g.coordinate(0) == -3.75);
  CHECK(g.index(1, 2, 3) == (1 * 16 + 2) * 16 + 3);
  const auto ix = g.indices(g.index(5, 7, 11));
  CHECK(ix[0] == 5);
  CHECK(ix[1] == 7);
  CHECK(ix[2] == 11);
  CHECK_THROWS(GridSpec{4.0, 15}.validate());
  CHECK_THROWS(GridSpec{-1.0, 16}.validate());
}

TEST_CASE("graded nodes") {
  const auto t = graded_time_nodes(2.0, 16);
  REQUIRE(t.size() == 17);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK((t[2] - t[1]) / (t[1] - t[0]) == doctest::Approx(1.5));
}

TEST_CASE("cubic interpolation reproduces cubics") {
  const GridSpec g{4.0, 16};
  auto cubic = [](const Point3& x) { return 1 + x.x1 - 0.5 * x.x2 * x.x2 + 0.1 * x.x1 * x.x2 * x.x3 + 0.01 * x.x3 * x.x3 * x.x3; };
  const ScalarField f = sample(g, cubic);
  const Point3 x{0.33, -1.21, 0.77};
  CHECK(interpolate(f, x) == doctest::Approx(cubic(x)).epsilon(1e-12));
  CHECK(interpolate(f, {10, 0, 0}) == 0.0);
}

TEST_CASE("round trip and derivative of a single mode") {
  const GridSpec g{4.0, 32};
  const double k = std::numbers::pi / 4.0;
  const ScalarField f = sample(g, [&](const Point3& x) { return std::sin(k * x.x1) * std::cos(2 * k * x.x3); });
  const ScalarField back = inverse(forward(f));
  CHECK((back - f).max_abs() < 1e-13);
  const ScalarField d = spectral_derivative(f, 0);
  const ScalarField exact = sample(g, [&](const Point3& x) { return k * std::cos(k * x.x1) * std::cos(2 * k * x.x3); });
  CHECK((d - exact).max_abs() < 1e-12);
  const ScalarField lap = spectral_laplacian(f);
  CHECK((lap + 5 * k * k * f).max_abs() < 1e-12);
}

TEST_CASE("grid H2 norm of a single mode") {
  const GridSpec g{4.0, 32};
  const double k = std::numbers::pi / 4.0;
  const ScalarField f = sample(g, [&](const Point3& x) { return std::sin(k * x.x1); });
  // sum |f|^2 dV = 512 / 2; weights 1 + k^2 + k^4.
  const double expected = std::sqrt(256.0 * (1 + k * k + k * k * k * k));
  CHECK(grid_h2_norm(forward(f)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("dealias mask") {
  const GridSpec g{4.0, 24};
  const double k = 2 * std::numbers::pi / 8.0;
  const ScalarField lo = sample(g, [&](const Point3& x) { return std::cos(3 * k * x.x2); });
  const ScalarField hi = sample(g, [&](const Point3& x) { return std::cos(9 * k * x.x2); });
  Spectrum s = forward(lo + hi);
  apply_dealias(s);
  CHECK((inverse(s) - lo).max_abs() < 1e-12);
}

TEST_CASE("upsampling reproduces a resolved trigonometric field") {
  const GridSpec g{4.0, 16};
  const double k = std::numbers::pi / 4.0;
  auto fn = [&](const Point3& x) { return std::sin(3 * k * x.x1 + 0.3) * std::cos(2 * k * x.x2) + std::cos(5 * k * x.x3); };
  const ScalarField fine = spectral_upsample(sample(g, fn), 2);
  CHECK(fine.grid() == GridSpec{4.0, 32});
  CHECK((fine - sample(fine.grid(), fn)).max_abs() < 1e-12);
  CHECK_THROWS_AS(spectral_upsample(sample(g, fn), 0), Error);
}
