#pragma once

#include <cstddef>
#include <vector>

namespace reveuler {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule (Newton iteration on P_n, tolerance near machine precision).
const GaussRule& gauss_legendre(std::size_t n);

/// Composite rule on [a, b]: `panels` equal panels with `n` points each.
GaussRule composite_gauss(double a, double b, std::size_t panels, std::size_t n);

}  // namespace reveuler
