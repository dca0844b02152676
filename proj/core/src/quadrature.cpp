#include "reveuler/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "reveuler/error.hpp"

namespace reveuler {

namespace {

GaussRule build_rule(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
                          static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::Validation, "Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, n == 1 ? GaussRule{{0.0}, {2.0}} : build_rule(n)).first;
  return it->second;
}

GaussRule composite_gauss(double a, double b, std::size_t panels, std::size_t n) {
  const GaussRule& base = gauss_legendre(n);
  GaussRule out;
  out.nodes.reserve(panels * n);
  out.weights.reserve(panels * n);
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    for (std::size_t k = 0; k < n; ++k) {
      out.nodes.push_back(lo + 0.5 * width * (base.nodes[k] + 1.0));
      out.weights.push_back(0.5 * width * base.weights[k]);
    }
  }
  return out;
}

}  // namespace reveuler
