#pragma once

// Grid surrogates for the H^2 and C^{1,delta} norms.

#include <cstdint>
#include <string>

#include "reveuler/geometry.hpp"
#include "reveuler/grid.hpp"

namespace reveuler {

enum class NormKind { SupC1delta, GridH2, Both };
std::string to_string(NormKind k);
NormKind norm_kind_from_string(const std::string& s);

/// Pair budget for Hoelder quotients: pairs along x1 straddling the plane
/// x1 = 0 with dyadic cell gaps, plus uniformly placed pairs with random axis
/// and dyadic gap. Both streams are seeded, so a larger budget only adds pairs.
struct HolderPairs {
  std::size_t straddling = 10000;
  std::size_t random = 10000;
  std::uint64_t seed = 20240917;

  friend bool operator==(const HolderPairs&, const HolderPairs&) = default;
};

/// max |f(x) - f(y)| / |x - y|^delta over the sampled pairs inside `region`.
double holder_seminorm(const ScalarField& f, double delta, const Box& region, const HolderPairs& pairs = {});

/// sup|f| + sum_j sup|d_j f| + sum_j [d_j f]_delta, derivatives spectral.
double c1delta_norm(const ScalarField& f, double delta, const Box& region, const HolderPairs& pairs = {});

/// Componentwise maxima over a vector field.
double sup_norm(const VectorField& v);
double c1delta_norm(const VectorField& v, double delta, const Box& region, const HolderPairs& pairs = {});
double grid_h2_norm(const ScalarField& f);
double grid_h2_norm(const VectorField& v);

}  // namespace reveuler
