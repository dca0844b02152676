#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reveuler/iteration.hpp"

namespace reveuler::cli {

struct DataCheckConfig {
  std::size_t divergence_points = 10000;
  std::size_t gradient_points = 1000;
  double sample_half_width = 4.0;
  double min_abs_x1 = 1e-3;
  double divergence_tol = 1e-9;
  double gradient_rel_tol = 1e-5;

  friend bool operator==(const DataCheckConfig&, const DataCheckConfig&) = default;
};

struct KernelCheckConfig {
  std::size_t antisymmetry_points = 1000;
  double antisymmetry_tol = 1e-15;
  /// (nu, sigma) pairs for the full-space weighted moment.
  std::vector<std::pair<double, double>> moment_pairs{{1e-1, 0.5}, {1e-2, 1.0}, {1e-3, 2.0}};
  double moment_tol = 1e-6;
  double moment_horizon = 1.0;
  std::vector<double> degeneracy_nus{1e-1, 1e-2, 1e-3, 1e-4};
  double degeneracy_t = 1.0;

  friend bool operator==(const KernelCheckConfig&, const KernelCheckConfig&) = default;
};

/// Everything a batch needs. JSON on disk; every key optional.
struct RunConfig {
  IterationConfig iteration{};
  /// Run the horizon search before checkpointing (iterate).
  bool contraction_search = true;
  std::vector<double> nus{1e-1, 5e-2, 2.5e-2};
  std::vector<double> epss{1e-1, 5e-2, 2.5e-2};
  /// Slab radii for the singular scan; empty picks dyadic defaults.
  std::vector<double> radii;
  GridSpec scan_grid{2.0, 128};
  int slab_lines = 8;
  std::vector<int> residual_grids{48, 64, 96};
  double residual_probe_half = 3.0;
  int residual_probes_per_axis = 6;
  /// Probe collar around x1 = 0, in spacings of the coarsest residual grid.
  double residual_collar_cells = 5.0;
  std::uint64_t seed = 20240917;
  std::string out = "rev_euler_out";
  bool checkpoint_all_nodes = false;
  DataCheckConfig data{};
  KernelCheckConfig kernel{};

  /// Throws Error(Validation).
  void validate() const;
  /// Copies `seed` into every seeded component.
  void propagate_seed();

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string to_json_text(const RunConfig& c);
/// Unknown keys are rejected.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

}  // namespace reveuler::cli
