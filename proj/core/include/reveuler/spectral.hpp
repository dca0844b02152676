#pragma once

// FFTW-backed transforms on the periodic extension of a GridSpec box, plus
// the wavenumber bookkeeping shared by every Fourier multiplier.

#include <complex>
#include <cstddef>
#include <vector>

#include "reveuler/grid.hpp"

namespace reveuler {

using Complex = std::complex<double>;

/// Half-spectrum of a real field: n x n x (n/2 + 1), last axis fastest.
struct Spectrum {
  GridSpec grid;
  std::vector<Complex> c;

  Spectrum() = default;
  explicit Spectrum(const GridSpec& g);

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator-=(const Spectrum& o);
  Spectrum& operator*=(double s);
};

/// Angular wavenumbers per axis and Nyquist flags.
struct Wavenumbers {
  std::vector<double> full;   // length n, standard unshifted ordering
  std::vector<double> half;   // length n/2 + 1
  std::vector<int> full_index;
  std::vector<int> half_index;
  int n = 0;

  explicit Wavenumbers(const GridSpec& g);
  [[nodiscard]] bool nyquist(int signed_index) const noexcept { return signed_index == n / 2 || signed_index == -n / 2; }
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

/// Calls fn(k, xi1, xi2, xi3, m1, m2, m3) for every stored mode; m are the
/// signed integer wavenumbers.
template <class Fn>
void for_each_mode(const GridSpec& g, Fn&& fn) {
  const Wavenumbers wn(g);
  const std::size_t n = static_cast<std::size_t>(g.n);
  const std::size_t nh = n / 2 + 1;
  std::size_t k = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < nh; ++c, ++k) {
        fn(k, wn.full[a], wn.full[b], wn.half[c], wn.full_index[a], wn.full_index[b], wn.half_index[c]);
      }
    }
  }
}

/// Multiplies by i xi_axis (zero at the Nyquist index of that axis).
void apply_derivative(Spectrum& s, Axis axis);
/// Multiplies by exp(-diffusion_time * |xi|^2), diffusion_time = nu * t.
void apply_heat(Spectrum& s, double diffusion_time);
/// Zeroes every mode with |m_a| > n/3 on some axis (2/3 rule).
void apply_dealias(Spectrum& s);

ScalarField spectral_derivative(const ScalarField& f, Axis axis);
ScalarField spectral_laplacian(const ScalarField& f);
/// Trigonometric interpolation onto the same box with `factor` times the
/// resolution (Nyquist modes dropped).
ScalarField spectral_upsample(const ScalarField& f, int factor);

/// Grid l2 norm sum_x |D^gamma f|^2 dV summed over all multi-indices
/// |gamma| <= 2 (Parseval), returned as its square root.
double grid_h2_norm(const Spectrum& s);

/// Sets the FFTW worker count (REV_EULER_THREADS or hardware concurrency).
void configure_threads(int workers);

}  // namespace reveuler
