#include "reveuler/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace reveuler {

namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    if (r2c != nullptr) fftw_destroy_plan(r2c);
    if (c2r != nullptr) fftw_destroy_plan(c2r);
  }
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int& configured_workers() {
  static int workers = 1;
  return workers;
}

const Plans& plans_for(int n) {
  static std::map<int, std::unique_ptr<Plans>> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  static bool threads_ready = false;
  if (!threads_ready) {
    fftw_init_threads();
    threads_ready = true;
  }
  fftw_plan_with_nthreads(configured_workers());
  const std::size_t m = static_cast<std::size_t>(n);
  const std::size_t real_size = m * m * m;
  const std::size_t cplx_size = m * m * (m / 2 + 1);
  auto* in = fftw_alloc_real(real_size);
  auto* out = fftw_alloc_complex(cplx_size);
  auto plans = std::make_unique<Plans>();
  plans->r2c = fftw_plan_dft_r2c_3d(n, n, n, in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans->c2r = fftw_plan_dft_c2r_3d(n, n, n, out, in, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  return *cache.emplace(n, std::move(plans)).first->second;
}

}  // namespace

void configure_threads(int workers) {
  std::lock_guard lock(planner_mutex());
  configured_workers() = workers < 1 ? 1 : workers;
}

Spectrum::Spectrum(const GridSpec& g)
    : grid(g),
      c(static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.n / 2 + 1)) {}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
  return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& o) {
  for (std::size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
  return *this;
}

Spectrum& Spectrum::operator*=(double s) {
  for (auto& v : c) v *= s;
  return *this;
}

Wavenumbers::Wavenumbers(const GridSpec& g) : n(g.n) {
  const double base = 2.0 * std::numbers::pi / (2.0 * g.half_width);
  for (int k = 0; k < n; ++k) {
    const int m = k <= n / 2 ? k : k - n;
    full.push_back(base * m);
    full_index.push_back(m);
  }
  for (int k = 0; k <= n / 2; ++k) {
    half.push_back(base * k);
    half_index.push_back(k);
  }
}

Spectrum forward(const ScalarField& f) {
  const GridSpec& g = f.grid();
  Spectrum s(g);
  std::vector<double> in(f.values().begin(), f.values().end());
  fftw_execute_dft_r2c(plans_for(g.n).r2c, in.data(), reinterpret_cast<fftw_complex*>(s.c.data()));
  return s;
}

ScalarField inverse(const Spectrum& s) {
  const GridSpec& g = s.grid;
  std::vector<Complex> scratch = s.c;  // c2r destroys its input
  std::vector<double> out(g.size());
  fftw_execute_dft_c2r(plans_for(g.n).c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(g.size());
  for (double& v : out) v *= scale;
  return ScalarField(g, std::move(out));
}

void apply_derivative(Spectrum& s, Axis axis) {
  const Wavenumbers wn(s.grid);
  for_each_mode(s.grid, [&](std::size_t k, double x1, double x2, double x3, int m1, int m2, int m3) {
    const double xi = axis == 0 ? x1 : (axis == 1 ? x2 : x3);
    const int m = axis == 0 ? m1 : (axis == 1 ? m2 : m3);
    s.c[k] *= wn.nyquist(m) ? Complex(0.0, 0.0) : Complex(0.0, xi);
  });
}

void apply_heat(Spectrum& s, double diffusion_time) {
  if (diffusion_time == 0.0) return;
  for_each_mode(s.grid, [&](std::size_t k, double x1, double x2, double x3, int, int, int) {
    s.c[k] *= std::exp(-diffusion_time * (x1 * x1 + x2 * x2 + x3 * x3));
  });
}

void apply_dealias(Spectrum& s) {
  const int cut = s.grid.n / 3;
  for_each_mode(s.grid, [&](std::size_t k, double, double, double, int m1, int m2, int m3) {
    if (std::abs(m1) > cut || std::abs(m2) > cut || std::abs(m3) > cut) s.c[k] = 0.0;
  });
}

ScalarField spectral_derivative(const ScalarField& f, Axis axis) {
  Spectrum s = forward(f);
  apply_derivative(s, axis);
  return inverse(s);
}

ScalarField spectral_laplacian(const ScalarField& f) {
  Spectrum s = forward(f);
  for_each_mode(s.grid, [&](std::size_t k, double x1, double x2, double x3, int, int, int) {
    s.c[k] *= -(x1 * x1 + x2 * x2 + x3 * x3);
  });
  return inverse(s);
}

ScalarField spectral_upsample(const ScalarField& f, int factor) {
  if (factor < 1) throw Error(ErrorKind::Validation, "upsampling factor must be >= 1");
  if (factor == 1) return f;
  const GridSpec& g = f.grid();
  const GridSpec fine{g.half_width, g.n * factor};
  const Spectrum s = forward(f);
  Spectrum out(fine);
  const int n = g.n;
  const int nf = fine.n;
  const int nh = n / 2 + 1;
  const int nfh = nf / 2 + 1;
  const double scale = static_cast<double>(fine.size()) / static_cast<double>(g.size());
  auto wrap = [](int m, int len) { return m < 0 ? m + len : m; };
  // Cell centres move by (h_fine - h) / 2 per axis.
  const double shift = 0.5 * (fine.spacing() - g.spacing());
  const double k0 = std::numbers::pi / g.half_width;
  auto phase = [&](int m) { return std::polar(1.0, k0 * m * shift); };
  for (int a = -n / 2 + 1; a < n / 2; ++a) {
    for (int b = -n / 2 + 1; b < n / 2; ++b) {
      for (int c = 0; c < n / 2; ++c) {
        const auto src = (static_cast<std::size_t>(wrap(a, n)) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(wrap(b, n))) * static_cast<std::size_t>(nh) + static_cast<std::size_t>(c);
        const auto dst = (static_cast<std::size_t>(wrap(a, nf)) * static_cast<std::size_t>(nf) +
                          static_cast<std::size_t>(wrap(b, nf))) * static_cast<std::size_t>(nfh) + static_cast<std::size_t>(c);
        out.c[dst] = scale * phase(a) * phase(b) * phase(c) * s.c[src];
      }
    }
  }
  return inverse(out);
}

double grid_h2_norm(const Spectrum& s) {
  const GridSpec& g = s.grid;
  const int nh = g.n / 2;
  double acc = 0.0;
  for_each_mode(g, [&](std::size_t k, double x1, double x2, double x3, int, int, int m3) {
    const double a = x1 * x1;
    const double b = x2 * x2;
    const double c = x3 * x3;
    // 1 + |xi|^2 + sum_{i <= j} xi_i^2 xi_j^2 counts every multi-index once.
    const double w = 1.0 + a + b + c + a * a + b * b + c * c + a * b + a * c + b * c;
    const double mult = (m3 == 0 || m3 == nh) ? 1.0 : 2.0;
    acc += mult * w * std::norm(s.c[k]);
  });
  const double count = static_cast<double>(g.size());
  return std::sqrt(acc * g.cell_volume() / count);
}

}  // namespace reveuler
