#include "reveuler/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "reveuler/error.hpp"
#include "reveuler/quadrature.hpp"

namespace reveuler {

void KernelSpec::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw Error(ErrorKind::Validation, "kernel viscosity must be > 0");
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::Validation, "kernel time must be > 0");
  if (!(eps >= 0.0)) throw Error(ErrorKind::Validation, "mollifier width must be >= 0");
}

double gaussian(const KernelSpec& spec, const Point3& y) {
  const double s = 4.0 * spec.nu * spec.t;
  return std::pow(std::numbers::pi * s, -1.5) * std::exp(-y.norm2() / s);
}

double gaussian_grad(const KernelSpec& spec, const Point3& y, Axis i) {
  return (-2.0 * y[i] / (4.0 * spec.nu * spec.t)) * gaussian(spec, y);
}

double weighted_second_moment(double nu, double sigma, Axis i, bool half_space, std::size_t nodes) {
  const double reach = 10.0 * std::sqrt(nu * sigma);
  const GaussRule full = composite_gauss(-reach, reach, 2, nodes);
  const GaussRule half = composite_gauss(0.0, reach, 1, nodes);
  const KernelSpec spec{nu, 0.0, sigma};
  std::array<const GaussRule*, 3> rules{&full, &full, &full};
  if (half_space) rules[static_cast<std::size_t>(i)] = &half;
  double acc = 0.0;
  for (std::size_t a = 0; a < rules[0]->nodes.size(); ++a) {
    for (std::size_t b = 0; b < rules[1]->nodes.size(); ++b) {
      for (std::size_t c = 0; c < rules[2]->nodes.size(); ++c) {
        const Point3 y{rules[0]->nodes[a], rules[1]->nodes[b], rules[2]->nodes[c]};
        const double w = rules[0]->weights[a] * rules[1]->weights[b] * rules[2]->weights[c];
        acc += w * (4.0 * y[i] * y[i] / (4.0 * nu * sigma)) * gaussian(spec, y);
      }
    }
  }
  return acc;
}

namespace {

double time_integrated_moment(double nu, double horizon, Axis i, std::size_t time_nodes, std::size_t space_nodes) {
  // sigma = tau^2, d sigma = 2 tau d tau on tau in [0, sqrt(T)].
  const GaussRule rule = composite_gauss(0.0, std::sqrt(horizon), 1, time_nodes);
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double tau = rule.nodes[k];
    acc += rule.weights[k] * 2.0 * tau * weighted_second_moment(nu, tau * tau, i, true, space_nodes);
  }
  return acc / 4.0;
}

}  // namespace

MomentReport second_moment(const KernelSpec& spec, double horizon, double lipschitz, Axis i) {
  spec.validate();
  if (!(horizon >= 0.0)) throw Error(ErrorKind::Validation, "moment horizon must be >= 0");
  MomentReport rep;
  rep.analytic_M2 = horizon / 4.0;
  if (horizon == 0.0) return rep;
  const double coarse = time_integrated_moment(spec.nu, horizon, i, 6, 12);
  const double fine = time_integrated_moment(spec.nu, horizon, i, 12, 20);
  if (std::abs(fine - coarse) > 1e-4 * std::max(1.0, std::abs(fine))) {
    throw Error(ErrorKind::QuadratureNonConvergent, "second moment refinement disagrees");
  }
  rep.measured_M2 = fine;
  rep.lipschitz_bound = 4.0 * lipschitz * fine;
  return rep;
}

std::vector<Point3> probe_lattice(double half, int per_axis) {
  std::vector<Point3> out;
  out.reserve(static_cast<std::size_t>(per_axis * per_axis * per_axis));
  auto coord = [&](int k) {
    return per_axis == 1 ? 0.0 : -half + 2.0 * half * static_cast<double>(k) / static_cast<double>(per_axis - 1);
  };
  for (int a = 0; a < per_axis; ++a) {
    for (int b = 0; b < per_axis; ++b) {
      for (int c = 0; c < per_axis; ++c) out.push_back({coord(a), coord(b), coord(c)});
    }
  }
  return out;
}

std::vector<double> degeneracy_scan(const ScalarEvaluator& f, double t, Axis i, std::span<const double> nus,
                                    std::span<const Point3> probes) {
  if (!(t > 0.0)) throw Error(ErrorKind::Validation, "degeneracy scan needs t > 0");
  std::vector<double> out;
  out.reserve(nus.size());
  for (double nu : nus) {
    const KernelSpec spec{nu, 0.0, t};
    spec.validate();
    const double reach = 10.0 * std::sqrt(nu * t);
    // Antisymmetrised form: integrate over y_i >= 0 only and pair y with its
    // reflection, so a constant f cancels exactly.
    const GaussRule full = composite_gauss(-reach, reach, 4, 8);
    const GaussRule half = composite_gauss(0.0, reach, 2, 8);
    std::array<const GaussRule*, 3> rules{&full, &full, &full};
    rules[static_cast<std::size_t>(i)] = &half;
    const std::size_t n0 = rules[0]->nodes.size();
    const std::size_t n1 = rules[1]->nodes.size();
    const std::size_t n2 = rules[2]->nodes.size();
    std::vector<Point3> ys;
    std::vector<double> kernel;
    ys.reserve(n0 * n1 * n2);
    kernel.reserve(n0 * n1 * n2);
    for (std::size_t a = 0; a < n0; ++a) {
      for (std::size_t b = 0; b < n1; ++b) {
        for (std::size_t c = 0; c < n2; ++c) {
          const Point3 y{rules[0]->nodes[a], rules[1]->nodes[b], rules[2]->nodes[c]};
          ys.push_back(y);
          kernel.push_back(rules[0]->weights[a] * rules[1]->weights[b] * rules[2]->weights[c] *
                           gaussian_grad(spec, y, i));
        }
      }
    }
    double sup = 0.0;
#pragma omp parallel for reduction(max : sup) schedule(dynamic)
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const Point3& x = probes[p];
      double acc = 0.0;
      for (std::size_t k = 0; k < ys.size(); ++k) acc += kernel[k] * (f(x - ys[k]) - f(x - reflect(ys[k], i)));
      sup = std::max(sup, std::abs(acc));
    }
    out.push_back(sup);
  }
  return out;
}

double newton_kernel_grad(const Point3& x, Axis i) {
  const double r2 = x.norm2();
  if (r2 == 0.0) throw Error(ErrorKind::SingularPoint, "Newtonian kernel gradient at the origin");
  const double r = std::sqrt(r2);
  return x[i] / (4.0 * std::numbers::pi * r2 * r);
}

}  // namespace reveuler
