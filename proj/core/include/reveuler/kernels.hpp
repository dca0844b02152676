#pragma once

// Gaussian heat kernels G_nu(t, y), their spatial derivatives, the gradient of
// the Newtonian kernel K3 = -1/(4 pi |x|) (so that Laplace K3 = delta), and the
// kernel facts used by the Lipschitz-convolution estimate.

#include <span>
#include <vector>

#include "reveuler/data_fields.hpp"
#include "reveuler/geometry.hpp"

namespace reveuler {

struct KernelSpec {
  double nu = 1.0;   // diffusivity
  double eps = 0.0;  // mollifier width, 0 = none
  double t = 1.0;    // kernel time

  void validate() const;
};

double gaussian(const KernelSpec& spec, const Point3& y);
double gaussian_grad(const KernelSpec& spec, const Point3& y, Axis i);

/// Integral of (4 y_i^2 / (4 nu sigma)) G_nu(sigma, y) over R^3 (or the half
/// space y_i >= 0), tensor Gauss-Legendre on [-R, R]^3 with R = 10 sqrt(nu sigma).
double weighted_second_moment(double nu, double sigma, Axis i, bool half_space, std::size_t nodes = 24);

struct MomentReport {
  double measured_M2 = 0.0;
  double analytic_M2 = 0.0;
  double lipschitz_bound = 0.0;  // 4 L M2
};

/// M2 = (1/4) int_0^T int_{y_i >= 0} (4 y_i^2 / (4 nu sigma)) G dy dsigma, time
/// quadrature after sigma = tau^2. Throws QuadratureNonConvergent when two
/// refinement levels disagree by more than 1e-4.
MomentReport second_moment(const KernelSpec& spec, double horizon, double lipschitz = 1.0, Axis i = 0);

/// Probe set for degeneracy scans: a uniform `per_axis`^3 lattice on [-half, half]^3.
std::vector<Point3> probe_lattice(double half, int per_axis);

/// sup over probes of |f * G_{nu,i}(t, .)| for each nu, by composite
/// Gauss-Legendre quadrature over [-R, R]^3, R = 10 sqrt(nu t).
std::vector<double> degeneracy_scan(const ScalarEvaluator& f, double t, Axis i, std::span<const double> nus,
                                    std::span<const Point3> probes);

/// d_i K3(x) = x_i / (4 pi |x|^3). Throws SingularPoint at the origin.
double newton_kernel_grad(const Point3& x, Axis i);

}  // namespace reveuler
