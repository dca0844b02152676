#include <cmath>

#include "doctest.h"
#include "reveuler/convolution.hpp"
#include "reveuler/error.hpp"
#include "reveuler/iteration.hpp"

using namespace reveuler;

namespace {

// Windowed planar swirl, x3-independent: a steady Euler flow with
// grad p = x_perp exp(-2 rho^2).
VectorField swirl(const GridSpec& g) {
  return sample_vector(g, [](const Point3& x) {
    const double w = std::exp(-(x.x1 * x.x1 + x.x2 * x.x2));
    return Vec3{x.x2 * w, -x.x1 * w, 0.0};
  });
}

VectorField smooth_state(const GridSpec& g) {
  return sample_vector(g, [](const Point3& x) {
    const double w = std::exp(-x.norm2());
    return Vec3{(x.x2 - x.x3) * w, (x.x3 - x.x1) * w, (x.x1 - x.x2) * w};
  });
}

IterationConfig small_config() {
  IterationConfig cfg;
  cfg.grid = GridSpec{8.0, 32};
  cfg.T = 0.1;
  cfg.kmax = 3;
  cfg.holder.straddling = 2000;
  cfg.holder.random = 2000;
  return cfg;
}

}  // namespace

TEST_CASE("guarded jet refuses the avoided entries") {
  const GridSpec g{4.0, 16};
  Jet jet(smooth_state(g), true, true);
  CHECK_THROWS_AS(jet.d(1, 0), Error);
  CHECK_THROWS_AS(jet.d(2, 0), Error);
  CHECK_NOTHROW(jet.d(0, 0));
  CHECK_NOTHROW(jet.d(1, 2));
  try {
    jet.d(2, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingDerivative);
  }
  IterationConfig cfg;
  // First-step forms never touch the guarded entries.
  for (int i = 0; i < 3; ++i) CHECK_NOTHROW(burgers_spectrum(jet, i, TermForm::FirstStep, cfg));
  CHECK_NOTHROW(leray_spectra(jet, TermForm::FirstStep, cfg));
  CHECK_THROWS_AS(burgers_spectrum(jet, 1, TermForm::Rewritten, cfg), Error);
}

TEST_CASE("first Burgers component is the plain transport term") {
  const GridSpec g{4.0, 32};
  IterationConfig cfg;
  cfg.grid = g;
  Jet jet(smooth_state(g), false, false);
  const ScalarField b = inverse(burgers_spectrum(jet, 0, TermForm::FirstStep, cfg));
  ScalarField expect(g);
  for (Axis j = 0; j < 3; ++j) expect += multiply(jet.v(j), jet.d(0, j));
  CHECK((b - expect).max_abs() < 1e-12);
}

TEST_CASE("first-step and rewritten forms agree") {
  const GridSpec g{4.0, 32};
  IterationConfig cfg;
  cfg.grid = g;
  const VectorField v = smooth_state(g);
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    cfg.eps = eps;
    Jet a(v, true, true);
    Jet b(v, false, true);
    double worst = 0;
    double scale = 0;
    for (int i = 0; i < 3; ++i) {
      const ScalarField fa = inverse(burgers_spectrum(a, i, TermForm::FirstStep, cfg));
      const ScalarField fb = inverse(burgers_spectrum(b, i, TermForm::Rewritten, cfg));
      worst = std::max(worst, (fa - fb).max_abs());
      scale = std::max(scale, fb.max_abs());
    }
    const auto la = leray_spectra(a, TermForm::FirstStep, cfg);
    const auto lb = leray_spectra(b, TermForm::Rewritten, cfg);
    for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, (inverse(la[i]) - inverse(lb[i])).max_abs());
    CHECK(worst < 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("Leray term of a steady swirl is its pressure gradient") {
  const GridSpec g{8.0, 64};
  IterationConfig cfg;
  cfg.grid = g;
  cfg.eps = 0.0;
  const VectorField v = swirl(g);
  const VectorField grad_p = sample_vector(g, [](const Point3& x) {
    const double w = std::exp(-2 * (x.x1 * x.x1 + x.x2 * x.x2));
    return Vec3{x.x1 * w, x.x2 * w, 0.0};
  });
  for (TermForm form : {TermForm::FirstStep, TermForm::Rewritten}) {
    Jet jet(v, form == TermForm::FirstStep, false);
    const auto l = leray_spectra(jet, form, cfg);
    double worst = 0;
    for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, (inverse(l[i]) - grad_p.c[i]).max_abs());
    CHECK(worst < 1e-4);
  }
  // Steady reversed flow: transport and pressure cancel.
  Jet jet(v, false, false);
  const auto l = leray_spectra(jet, TermForm::Rewritten, cfg);
  double worst = 0;
  for (int i = 0; i < 3; ++i) {
    Spectrum f = burgers_spectrum(jet, i, TermForm::Rewritten, cfg);
    f += l[static_cast<std::size_t>(i)];
    worst = std::max(worst, inverse(f).max_abs());
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("literal Leray convention doubles the diagonal and flips the sign") {
  const GridSpec g{4.0, 32};
  IterationConfig phys;
  phys.grid = g;
  IterationConfig lit = phys;
  lit.leray = LerayConvention::Literal;
  Jet jet(smooth_state(g), false, true);
  const Spectrum sp = leray_source(jet, TermForm::Rewritten, phys);
  const Spectrum sl = leray_source(jet, TermForm::Rewritten, lit);
  ScalarField diag(g);
  for (int m = 0; m < 3; ++m) diag += multiply(jet.d(m, m), jet.d(m, m));
  Spectrum sd = forward(diag);
  apply_dealias(sd);
  // literal = 2 diag + (physical - diag) = physical + diag
  CHECK((inverse(sl) - inverse(sp) - inverse(sd)).max_abs() < 1e-12);
  const auto lp = leray_spectra(jet, TermForm::Rewritten, phys);
  Spectrum manual = sp;
  apply_leray_grad(manual, 1);
  CHECK((inverse(lp[1]) + inverse(manual)).max_abs() < 1e-14);
}

TEST_CASE("zero data is a fixed point") {
  IterationConfig cfg = small_config();
  cfg.zero_data = true;
  const IterationState st = iterate(cfg);
  for (const auto& f : st.v.fields) CHECK(sup_norm(f) == 0.0);
  for (const auto& r : st.norm_history) CHECK(r.sup_diff == 0.0);
  const ContractionResult c = run_contraction(cfg);
  CHECK(c.trivially_contracting);
}

TEST_CASE("iteration bookkeeping on the planar data") {
  IterationConfig cfg = small_config();
  const IterationState s0 = init_step0(cfg);
  CHECK(s0.guard_avoided);
  // t = 0 node carries the (dealiased) data itself.
  CHECK((s0.v.fields[0] - baseline(s0, 0)).max_abs() == 0.0);
  const IterationState st = iterate(cfg);
  CHECK(st.k == cfg.kmax);
  CHECK_FALSE(st.guard_avoided);
  for (std::size_t n = 0; n < st.nodes(); ++n) {
    const VectorField back = increment(st, n) + baseline(st, n);
    CHECK((back - st.v.fields[n]).max_abs() < 1e-12);
  }
  CHECK(sup_norm(increment(st, 0)) == 0.0);
  REQUIRE(st.norm_history.size() == static_cast<std::size_t>(cfg.kmax + 1));
  for (int k = 1; k < cfg.kmax; ++k) {
    const auto& r = st.norm_history[static_cast<std::size_t>(k)];
    REQUIRE(r.contraction_ratio.has_value());
    CHECK(*r.contraction_ratio < 0.5);
  }
  CHECK_FALSE(st.norm_history.back().contraction_ratio.has_value());
  const double level0 = st.norm_history.front().max_divergence;
  for (const auto& r : st.norm_history) CHECK(r.max_divergence <= level0 + 1e-3);
}

TEST_CASE("ratios grow with the horizon") {
  IterationConfig cfg = small_config();
  std::vector<double> ratio;
  for (double T : {0.1, 0.2, 0.4}) {
    cfg.T = T;
    ratio.push_back(*iterate(cfg).norm_history[1].contraction_ratio);
  }
  CHECK(ratio[0] < ratio[1]);
  CHECK(ratio[1] < ratio[2]);
}

TEST_CASE("Navier force term") {
  const GridSpec g{4.0, 32};
  VectorField c(g);
  c.c[0] = ScalarField(g, 1.0);
  CHECK(sup_norm(navier_force_term(c, 0.1)) < 1e-14);
  const double k = std::numbers::pi / 4.0;
  VectorField m(g);
  m.c[1] = sample(g, [&](const Point3& x) { return std::cos(k * x.x3); });
  const VectorField f = navier_force_term(m, 0.1);
  CHECK((f.c[1] - 0.1 * k * k * m.c[1]).max_abs() < 1e-13);
}

TEST_CASE("configuration validation") {
  IterationConfig cfg;
  cfg.kmax = 1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = IterationConfig{};
  cfg.nu = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK(IterationConfig{}.effective_delta() == doctest::Approx(0.3));
}
