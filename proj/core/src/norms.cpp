#include "reveuler/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "reveuler/error.hpp"
#include "reveuler/spectral.hpp"

namespace reveuler {

std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::SupC1delta: return "sup_c1delta";
    case NormKind::GridH2: return "grid_h2";
    case NormKind::Both: return "both";
  }
  return "both";
}

NormKind norm_kind_from_string(const std::string& s) {
  if (s == "sup_c1delta") return NormKind::SupC1delta;
  if (s == "grid_h2") return NormKind::GridH2;
  if (s == "both") return NormKind::Both;
  throw Error(ErrorKind::Validation, "unknown norm kind '" + s + "' (expected sup_c1delta|grid_h2|both)");
}

namespace {

int log2_floor(int n) {
  int d = 0;
  while ((2 << d) <= n) ++d;
  return d;
}

}  // namespace

double holder_seminorm(const ScalarField& f, double delta, const Box& region, const HolderPairs& pairs) {
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorKind::Validation, "Hoelder exponent must lie in (0, 1]");
  const GridSpec& g = f.grid();
  const int n = g.n;
  const int levels = log2_floor(n);
  double best = 0.0;

  auto consider = [&](std::array<int, 3> a, std::array<int, 3> b) {
    for (int k = 0; k < 3; ++k) {
      if (a[k] < 0 || a[k] >= n || b[k] < 0 || b[k] >= n) return;
    }
    const Point3 pa{g.coordinate(a[0]), g.coordinate(a[1]), g.coordinate(a[2])};
    const Point3 pb{g.coordinate(b[0]), g.coordinate(b[1]), g.coordinate(b[2])};
    if (!region.contains(pa) || !region.contains(pb)) return;
    const double dist = (pa - pb).norm();
    const double q = std::abs(f.at(a[0], a[1], a[2]) - f.at(b[0], b[1], b[2])) / std::pow(dist, delta);
    best = std::max(best, q);
  };

  {
    std::mt19937_64 rng(pairs.seed);
    std::uniform_int_distribution<int> cell(0, n - 1);
    std::uniform_int_distribution<int> level(0, levels - 1);
    for (std::size_t k = 0; k < pairs.straddling; ++k) {
      const int gap = 1 << level(rng);
      const int below = std::uniform_int_distribution<int>(0, gap - 1)(rng);
      const int lo = n / 2 - 1 - below;
      const int i2 = cell(rng);
      const int i3 = cell(rng);
      consider({lo, i2, i3}, {lo + gap, i2, i3});
    }
  }
  {
    std::mt19937_64 rng(pairs.seed + 1);
    std::uniform_int_distribution<int> cell(0, n - 1);
    std::uniform_int_distribution<int> level(0, levels - 1);
    std::uniform_int_distribution<int> axis(0, 2);
    for (std::size_t k = 0; k < pairs.random; ++k) {
      std::array<int, 3> a{cell(rng), cell(rng), cell(rng)};
      const int ax = axis(rng);
      const int gap = 1 << level(rng);
      std::array<int, 3> b = a;
      b[static_cast<std::size_t>(ax)] += gap;
      consider(a, b);
    }
  }
  return best;
}

double c1delta_norm(const ScalarField& f, double delta, const Box& region, const HolderPairs& pairs) {
  double total = f.max_abs();
  const Spectrum s = forward(f);
  for (Axis j = 0; j < 3; ++j) {
    Spectrum d = s;
    apply_derivative(d, j);
    const ScalarField df = inverse(d);
    total += df.max_abs() + holder_seminorm(df, delta, region, pairs);
  }
  return total;
}

double sup_norm(const VectorField& v) {
  return std::max({v.c[0].max_abs(), v.c[1].max_abs(), v.c[2].max_abs()});
}

double c1delta_norm(const VectorField& v, double delta, const Box& region, const HolderPairs& pairs) {
  double out = 0.0;
  for (const auto& c : v.c) out = std::max(out, c1delta_norm(c, delta, region, pairs));
  return out;
}

double grid_h2_norm(const ScalarField& f) { return grid_h2_norm(forward(f)); }

double grid_h2_norm(const VectorField& v) {
  double out = 0.0;
  for (const auto& c : v.c) out = std::max(out, grid_h2_norm(c));
  return out;
}

}  // namespace reveuler
