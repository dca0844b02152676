#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "reveuler/diagnostics.hpp"
#include "reveuler/error.hpp"
#include "reveuler/field_io.hpp"
#include "reveuler/norms.hpp"
#include "reveuler/spectral.hpp"

using namespace reveuler;

namespace {

double gauss3(const Point3& x) { return std::exp(-x.norm2()); }

ScalarField decaying(const GridSpec& g) {
  return sample(g, [](const Point3& x) {
    const double s = 1.0 + x.norm2();
    return 1.0 / (s * s);
  });
}

VectorField smooth_state(const GridSpec& g) {
  return sample_vector(g, [](const Point3& x) {
    const double w = std::exp(-x.norm2());
    return Vec3{(x.x2 - x.x3) * w, (x.x3 - x.x1) * w, (x.x1 - x.x2) * w};
  });
}

}  // namespace

TEST_CASE("FLD1 round trip is bit exact") {
  const GridSpec g{3.5, 16};
  VectorField v = smooth_state(g);
  v.c[1][17] = -0.0;
  v.c[2][5] = 1e-310;
  const auto dir = std::filesystem::temp_directory_path() / "reveuler_fld1_test";
  std::filesystem::create_directories(dir);
  write_fld1(dir / "v.fld", v);
  const VectorField back = read_fld1_vector(dir / "v.fld");
  CHECK(back.grid() == g);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK_MESSAGE(std::bit_cast<std::uint64_t>(back.c[i][k]) == std::bit_cast<std::uint64_t>(v.c[i][k]), k);
    }
  }
  const std::uintmax_t bytes = std::filesystem::file_size(dir / "v.fld");
  CHECK(bytes == 4 + 4 + 8 + 1 + 1 + 3 * g.size() * 8);
  {
    std::ofstream bad(dir / "bad.fld", std::ios::binary);
    bad << "FLD2";
  }
  CHECK_THROWS_AS(read_fld1(dir / "bad.fld"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("Hoelder seminorm oracles") {
  const GridSpec g32{2.0, 32};
  const GridSpec g64{2.0, 64};
  const GridSpec g128{2.0, 128};
  CHECK(holder_seminorm(ScalarField(g32, 3.0), 0.5, Box::cube(2.0)) == 0.0);
  auto root = [](const GridSpec& g) { return sample(g, [](const Point3& x) { return std::sqrt(std::abs(x.x1)); }); };
  const double a = holder_seminorm(root(g32), 0.5, Box::cube(2.0));
  const double b = holder_seminorm(root(g64), 0.5, Box::cube(2.0));
  const double c = holder_seminorm(root(g128), 0.5, Box::cube(2.0));
  CHECK(std::isfinite(c));
  CHECK(c <= std::sqrt(2.0) + 1e-12);
  CHECK(std::abs(c - b) <= 0.1 * c);
  const double a7 = holder_seminorm(root(g32), 0.7, Box::cube(2.0));
  const double b7 = holder_seminorm(root(g64), 0.7, Box::cube(2.0));
  const double c7 = holder_seminorm(root(g128), 0.7, Box::cube(2.0));
  CHECK(b7 > 1.1 * a7);
  CHECK(c7 > 1.1 * b7);
}

TEST_CASE("Hoelder seminorm is monotone in the pair budget") {
  const GridSpec g{4.0, 32};
  const ScalarField f = sample(g, [](const Point3& x) { return std::cbrt(x.x1) * std::cos(x.x2) + 0.1 * x.x3; });
  double prev = 0.0;
  for (std::size_t m : {100u, 1000u, 5000u, 10000u}) {
    const double s = holder_seminorm(f, 0.3, Box::cube(4.0), HolderPairs{m, m, 99});
    CHECK(s >= prev);
    prev = s;
  }
}

TEST_CASE("curl of a gradient vanishes and the manufactured curl matches") {
  const GridSpec g{8.0, 64};
  const VectorField grad = sample_vector(g, [](const Point3& x) {
    const double e = -2.0 * gauss3(x);
    return Vec3{e * x.x1, e * x.x2, e * x.x3};
  });
  CHECK(vorticity(grad).max_abs() < 1e-10);

  const VectorField swirl = sample_vector(g, [](const Point3& x) {
    const double w = gauss3(x);
    return Vec3{0.0, -x.x3 * w, x.x2 * w};
  });
  const VectorField w = vorticity(swirl);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point3 x = g.point(k);
    const double exact = (2.0 - 2.0 * (x.x2 * x.x2 + x.x3 * x.x3)) * gauss3(x);
    err = std::max(err, std::abs(w.c[0][k] - exact));
  }
  CHECK(err < 1e-5);
}

TEST_CASE("Lipschitz estimate") {
  const GridSpec g{4.0, 32};
  ScalarSlab zero{{0.0, 0.5}, {ScalarField(g), ScalarField(g)}};
  CHECK(lipschitz_estimate(zero) == 0.0);
  ScalarSlab lin{{0.0, 0.5}, {sample(g, [](const Point3& x) { return 0.5 * x.x1; }),
                               sample(g, [](const Point3& x) { return 2.0 * x.x2 - x.x3; })}};
  const double L = lipschitz_estimate(lin);
  CHECK(L <= std::sqrt(5.0) + 1e-12);
  CHECK(L >= 2.0 - 1e-12);
  ScalarSlab single{{0.0}, {ScalarField(g)}};
  CHECK_THROWS_AS(lipschitz_estimate(single), Error);
}

TEST_CASE("slab scan: smooth field is bounded") {
  const GridSpec g{2.0, 128};
  const SlabProfile p = singular_slab_scan(slab_fields(smooth_state(g)), default_slab_radii(g));
  CHECK(p.rows.size() >= 4);
  CHECK(p.omega1.trend == Trend::Bounded);
  CHECK(p.grad_v2.trend == Trend::Bounded);
  CHECK(p.grad_v3.trend == Trend::Bounded);
  CHECK(p.v1.trend == Trend::Bounded);
}

// Dense closed-form sup of |grad h_c| over the shell r/2 < x1 <= r on a
// coarse (x2, x3) lattice; the grid scan should reproduce its slope.
double dense_shell_sup(const Params& p, int comp, double r) {
  double out = 0.0;
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      const double x2 = -1.9 + a * (3.8 / 15.0);
      const double x3 = -1.9 + b * (3.8 / 15.0);
      for (int k = 1; k <= 2000; ++k) {
        const double x1 = 0.5 * r * (1.0 + k / 2000.0);
        const Mat3 m = eval_grad_h({x1, x2, x3}, p);
        const auto& row = m[static_cast<std::size_t>(comp)];
        out = std::max(out, std::sqrt(row[0] * row[0] + row[1] * row[1] + row[2] * row[2]));
      }
    }
  }
  return out;
}

double slope3(const std::vector<double>& r, const std::vector<double>& s) {
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    mx += std::log(r[k]) / 3.0;
    my += std::log(s[k]) / 3.0;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    sxy += (std::log(r[k]) - mx) * (std::log(s[k]) - my);
    sxx += (std::log(r[k]) - mx) * (std::log(r[k]) - mx);
  }
  return sxy / sxx;
}

TEST_CASE("slab scan: data gradients grow toward the plane") {
  const GridSpec g{2.0, 128};
  const Params p;
  const auto radii = default_slab_radii(g);
  const SlabProfile prof = singular_slab_scan(slab_fields(g, p), radii);
  CHECK(prof.grad_v2.trend == Trend::Growing);
  CHECK(prof.grad_v3.trend == Trend::Growing);
  CHECK(prof.grad_v2.uniform);
  CHECK(prof.grad_v3.uniform);
  CHECK(prof.v1.trend == Trend::Bounded);

  const std::vector<double> inner(radii.end() - 3, radii.end());
  for (int comp : {1, 2}) {
    std::vector<double> dense;
    for (double r : inner) dense.push_back(dense_shell_sup(p, comp, r));
    const double oracle = slope3(inner, dense);
    const double measured = comp == 1 ? prof.grad_v2.slope : prof.grad_v3.slope;
    CHECK(std::abs(measured - oracle) < 0.1);
  }
}

TEST_CASE("compactified sup") {
  const GridSpec g32{8.0, 32};
  const GridSpec g64{8.0, 64};
  CHECK(compactify_check(ScalarField(g32), 1) == 0.0);
  const double a = compactify_check(decaying(g32), 1);
  const double b = compactify_check(decaying(g64), 1);
  CHECK(std::isfinite(b));
  CHECK(std::abs(a - b) <= 0.1 * b);
  CHECK(compactify_check(2.5 * decaying(g32), 1) == doctest::Approx(2.5 * a).epsilon(1e-12));
  CHECK_THROWS_AS(compactify_check(ScalarField(g32, 1.0), 1), Error);
  CHECK(compactify_check(ScalarField(g32, 1.0), 0) == doctest::Approx(1.0));
}

TEST_CASE("direct Leray quadrature inverts the Laplacian") {
  const GridSpec g{8.0, 64};
  const ScalarField fine =
      spectral_upsample(sample(g, [](const Point3& x) { return (4.0 * x.norm2() - 6.0) * gauss3(x); }), 2);
  double err = 0.0;
  for (const Point3& x : {Point3{0.3, -0.5, 0.7}, Point3{1.0, 1.0, 0.2}, Point3{-0.4, 0.1, -1.3}}) {
    const Vec3 k = leray_grad_quadrature(fine, x);
    for (Axis i = 0; i < 3; ++i) err = std::max(err, std::abs(k[static_cast<std::size_t>(i)] + 2.0 * x[i] * gauss3(x)));
  }
  CHECK(err < 2e-4);
}

TEST_CASE("reversed Euler residual") {
  SUBCASE("stationary zero slab") {
    const GridSpec g{4.0, 16};
    VectorSlab slab{{0.0, 0.1, 0.3}, {VectorField(g), VectorField(g), VectorField(g)}};
    CHECK(reversed_euler_residual(slab, residual_probes(2.0, 3, 1.0)) == 0.0);
  }
  SUBCASE("steady swirl with its exact pressure") {
    const GridSpec g{8.0, 64};
    const VectorField v = sample_vector(g, [](const Point3& x) {
      const double w = std::exp(-(x.x1 * x.x1 + x.x2 * x.x2));
      return Vec3{x.x2 * w, -x.x1 * w, 0.0};
    });
    VectorSlab slab{{0.0, 0.1, 0.25}, {v, v, v}};
    ResidualOptions opts;
    opts.pressure_gradient = [](const Point3& x, double) {
      const double w = std::exp(-2.0 * (x.x1 * x.x1 + x.x2 * x.x2));
      return Vec3{x.x1 * w, x.x2 * w, 0.0};
    };
    const double r = reversed_euler_residual(slab, residual_probes(2.0, 5, 5 * g.spacing()), opts);
    CHECK(r < 1e-3);
  }
  SUBCASE("time relabelling flips to the forward residual") {
    const GridSpec g{6.0, 32};
    const VectorField base = smooth_state(g);
    VectorSlab slab;
    slab.times = {0.0, 0.1, 0.25, 0.45, 0.7};
    for (double t : slab.times) {
      VectorField v = base;
      for (auto& c : v.c) c *= 1.0 + t * t;
      slab.fields.push_back(v);
    }
    const double T = slab.times.back();
    VectorSlab relabel;
    for (std::size_t k = slab.size(); k-- > 0;) {
      relabel.times.push_back(T - slab.times[k]);
      relabel.fields.push_back(slab.fields[k]);
    }
    const auto probes = residual_probes(1.5, 3, 0.5);
    for (int n = 1; n <= 3; ++n) {
      ResidualOptions rev;
      rev.node = n;
      ResidualOptions fwd;
      fwd.node = 4 - n;
      fwd.direction = TimeDirection::Forward;
      const double a = reversed_euler_residual(slab, probes, rev);
      const double b = reversed_euler_residual(relabel, probes, fwd);
      CHECK(a > 0.0);
      CHECK(b == doctest::Approx(a).epsilon(1e-10));
    }
  }
}

TEST_CASE("report serialisation") {
  DiagnosticsReport r;
  r.holder_exponents["h1"] = 0.4;
  r.lipschitz_B = 1.5;
  r.M2 = std::numeric_limits<double>::infinity();
  NormRecord rec;
  rec.k = 1;
  rec.contraction_ratio = 0.25;
  r.contraction.push_back(rec);
  r.residual_trend = {{48, 1e-2}, {64, 5e-3}};
  r.T = 0.5;
  const std::string a = report_json(r);
  CHECK(a == report_json(r));
  CHECK(a.find("\"M2\": \"divergent\"") != std::string::npos);
  CHECK(a.find("\"singular_slab_profile\"") != std::string::npos);
  CHECK(contraction_csv(r.contraction).rfind("k,sup_incr,", 0) == 0);
  CHECK(residual_csv(r.residual_trend) == "n,residual\n48,0.01\n64,0.0050000000000000001\n");
  CHECK(norm_record_jsonl(rec).find("\"contraction_ratio\":0.25") != std::string::npos);
}

TEST_CASE("Hoelder exponent estimate across the plane") {
  const GridSpec g{2.0, 64};
  const ScalarField smooth = sample(g, [](const Point3& x) { return std::sin(x.x1) * std::cos(x.x2); });
  CHECK(holder_exponent_estimate(smooth) == doctest::Approx(1.0).epsilon(0.02));
  const ScalarField root = sample(g, [](const Point3& x) { return std::sqrt(std::abs(x.x1)) * (x.x1 > 0 ? 1.0 : 0.0); });
  CHECK(holder_exponent_estimate(root) == doctest::Approx(0.5).epsilon(0.1));
  CHECK(holder_exponent_estimate(ScalarField(g, 2.0)) == 1.0);
}

TEST_CASE("report JSON parses back to the same text") {
  DiagnosticsReport r;
  r.holder_exponents["v1"] = 0.61;
  r.lipschitz_L = std::numeric_limits<double>::infinity();
  NormRecord rec;
  rec.k = 2;
  rec.sup_incr = 1.0 / 3.0;
  r.contraction = {rec};
  r.singular_slab_profile.rows = {{0.5, 1, 2, 3, 4}};
  r.singular_slab_profile.lines = {{0.25, -0.75}};
  r.singular_slab_profile.grad_v2.trend = Trend::Growing;
  r.singular_slab_profile.grad_v2.line_slopes = {-0.7, -0.8};
  r.decay = {{"h1", DecayCertificate{2, 0, 2.6, 1.2, true}}};
  r.limit_table = {{0.1, 0.1, true, 0.2, 1e-3, std::nullopt}, {0.05, 0.05, true, 0.3, 2e-3, 1e-4}};
  r.cauchy = true;
  const std::string text = report_json(r);
  CHECK(report_json(parse_report_json(text)) == text);
  CHECK(norm_record_jsonl(parse_norm_record_jsonl(norm_record_jsonl(rec))) == norm_record_jsonl(rec));
  CHECK_THROWS_AS(parse_report_json("{"), Error);
}
