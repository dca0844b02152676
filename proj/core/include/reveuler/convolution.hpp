#pragma once

// Spatial and space-time convolutions on truncated grids. The spectral path
// works on the periodic extension of the box; the direct-quadrature path
// integrates over the free-space kernel on the truncated box and serves as
// the reference for truncation bias.

#include <optional>
#include <span>
#include <vector>

#include "reveuler/data_fields.hpp"
#include "reveuler/grid.hpp"
#include "reveuler/spectral.hpp"

namespace reveuler {

/// f * G_nu(t): multiplier exp(-nu t |xi|^2). t == 0 returns f.
ScalarField heat_convolve(const ScalarField& f, double nu, double t);
/// f * G_{nu,j}(t): multiplier i xi_j exp(-nu t |xi|^2). Throws ZeroTime at t == 0.
ScalarField heat_grad_convolve(const ScalarField& f, double nu, double t, Axis j);
/// f *_sp G_eps at unit kernel time (variance 2 eps per axis). eps == 0 is the identity.
ScalarField mollify(const ScalarField& f, double eps);
/// K_{,i} *_sp source with K = -1/(4 pi |x|): multiplier -i xi_i / |xi|^2,
/// zero mode removed.
ScalarField leray_grad_convolve(const ScalarField& source, Axis i);
void apply_leray_grad(Spectrum& s, Axis i);

/// Exponential-integrator weights for one interval of width h with decay
/// rate lambda: int over the interval of exp(-lambda (t_end - s)) times the
/// two linear hat functions, divided by h.
struct DuhamelWeights {
  double decay;  // exp(-lambda h)
  double left;
  double right;
};
DuhamelWeights duhamel_weights(double lambda_h);

/// Streaming Duhamel integral in Fourier space,
/// I(t_n) = int_0^{t_n} F(s) * G_nu(t_n - s) ds, with F piecewise linear in s
/// between pushed nodes and the heat factor integrated exactly per mode.
class DuhamelAccumulator {
 public:
  DuhamelAccumulator(const GridSpec& grid, double nu);

  /// Pushes the next node (t must exceed the previous one; the first push must be t = 0).
  void push(double t, Spectrum forcing);
  [[nodiscard]] const Spectrum& integral() const noexcept { return integral_; }
  [[nodiscard]] double time() const noexcept { return time_; }

 private:
  GridSpec grid_;
  double nu_;
  bool started_ = false;
  double time_ = 0.0;
  std::vector<double> lambda_;
  Spectrum last_;
  Spectrum integral_;
};

struct SpacetimeOptions {
  bool richardson = true;
  double richardson_tol = 1e-3;
};

/// int_0^t F(t - sigma) *_sp G_nu(sigma) d sigma (or with G_{nu,deriv}). t must
/// lie in [0, last slab time]; an interior t is handled by linear interpolation
/// of the slab. Throws InsufficientSlab when the half-resolution result
/// disagrees by more than the tolerance (relative to the sup of the result).
ScalarField spacetime_convolve(const ScalarSlab& slab, double nu, double t, std::optional<Axis> deriv = std::nullopt,
                               const SpacetimeOptions& opts = {});

/// Direct reference: (f * G_nu(t))(x) for an analytic f by tensor
/// Gauss-Legendre over [-R, R]^3, R = 10 sqrt(nu t).
double heat_convolve_direct(const ScalarEvaluator& f, double nu, double t, const Point3& x, std::size_t nodes = 24);

/// Direct reference on grid data: free-space Gaussian summed over the box
/// (no periodic images), separable O(n^4).
ScalarField heat_convolve_direct(const ScalarField& f, double nu, double t);

struct LerayQuadrature {
  std::size_t radial_panels = 8;
  std::size_t radial_nodes = 8;
  std::size_t polar_nodes = 32;
  std::size_t azimuth_nodes = 64;
  double radius = 0.0;  // 0: reach the far corner of the box
};

/// Direct quadrature of (K_{,i} * source)(x) for i = 0, 1, 2 in spherical
/// shells around x (the 1/|x|^2 singularity cancels against the volume element).
Vec3 leray_grad_direct(const ScalarEvaluator& source, const Point3& x, double box_half_width,
                       const LerayQuadrature& q = {});

}  // namespace reveuler
