#pragma once

// Two-phase fixed-point scheme for the viscous time-reversed system: step 0
// is the heat-evolved data, the first update uses the mollified
// integration-by-parts forms, later updates use the rewritten forms.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reveuler/data_fields.hpp"
#include "reveuler/grid.hpp"
#include "reveuler/norms.hpp"
#include "reveuler/spectral.hpp"

namespace reveuler {

enum class TermForm { FirstStep, Rewritten };
/// Physical: L_i = -K_{,i} * sum_{m,j} v_{m,j} v_{j,m}, the pressure term of
/// the viscous system. Literal: L_i = +K_{,i} * 2 (...) with the factor 2 on
/// every summand, as in the first-step display.
enum class LerayConvention { Physical, Literal };
/// Last product of the first-step Leray term: v_{1,3,1} v_3 (V3) or v_{1,3,1} v_2 (V2).
enum class LastProduct { V3, V2 };

std::string to_string(TermForm f);
std::string to_string(LerayConvention c);
LerayConvention leray_convention_from_string(const std::string& s);
std::string to_string(LastProduct c);
LastProduct last_product_from_string(const std::string& s);

struct IterationConfig {
  Params params{};
  GridSpec grid{8.0, 64};
  double nu = 1e-2;
  double eps = 1e-2;
  double T = 0.05;
  int nsteps_time = 16;
  double time_grading = 1.5;
  int kmax = 4;
  NormKind norm_kind = NormKind::Both;
  LerayConvention leray = LerayConvention::Physical;
  LastProduct last_product = LastProduct::V3;
  bool dealias = true;
  bool zero_data = false;
  double richardson_tol = 1e-3;
  HolderPairs holder{};
  /// Hoelder exponent for the C^{1,delta} surrogate; <= 0 picks half of 2 beta0 - 3.
  double holder_delta = 0.0;

  void validate() const;
  [[nodiscard]] double effective_delta() const;
  [[nodiscard]] std::vector<double> time_nodes() const { return graded_time_nodes(T, nsteps_time, time_grading); }

  friend bool operator==(const IterationConfig&, const IterationConfig&) = default;
};

struct NormRecord {
  int k = 0;
  // Norms of the increment v(k) - h * G_nu, max over time nodes.
  double sup_incr = 0.0;
  double holder_c1delta_incr = 0.0;
  double grid_h2_incr = 0.0;
  // Norms of the successive difference v(k) - v(k-1); the contraction
  // ratio compares these between consecutive k.
  double sup_diff = 0.0;
  double holder_c1delta_diff = 0.0;
  double grid_h2_diff = 0.0;
  /// Primary-norm ratio of the next difference to this one.
  std::optional<double> contraction_ratio;
  double richardson_rel = 0.0;
  double max_divergence = 0.0;
};

struct IterationState {
  int k = 0;
  double nu = 0.0;
  VectorSlab v;
  std::optional<VectorSlab> previous;
  /// Spectrum of the sampled data (dealiased when configured); the baseline
  /// h * G_nu is recomputed from it on demand.
  std::array<Spectrum, 3> data;
  /// Set on the step-0 state: entries (2,1) and (3,1) of the Jacobian carry
  /// no viscosity-uniform bound and first-step forms must not read them.
  bool guard_avoided = false;
  std::vector<NormRecord> norm_history;

  [[nodiscard]] const GridSpec& grid() const { return data[0].grid; }
  [[nodiscard]] std::size_t nodes() const { return v.times.size(); }
};

/// Spectral Jacobian of one velocity snapshot with lazily computed entries.
class Jet {
 public:
  Jet(const VectorField& v, bool guard_avoided, bool dealias);
  [[nodiscard]] const ScalarField& v(int i) const { return field_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] const Spectrum& spectrum(int i) const { return spec_[static_cast<std::size_t>(i)]; }
  /// d v_i / d x_j (0-based). Throws MissingDerivative on a guarded entry.
  const ScalarField& d(int i, Axis j);
  /// d^2 v_i / d x_j d x_l.
  ScalarField dd(int i, Axis j, Axis l) const;
  [[nodiscard]] bool guarded() const noexcept { return guard_; }
  [[nodiscard]] bool dealias() const noexcept { return dealias_; }

 private:
  std::array<ScalarField, 3> field_;
  std::array<Spectrum, 3> spec_;
  std::array<std::optional<ScalarField>, 9> d_;
  bool guard_;
  bool dealias_;
};

/// Spectrum of B_i (i 0-based) at one snapshot.
Spectrum burgers_spectrum(Jet& jet, int i, TermForm form, const IterationConfig& cfg);
/// Spectra of L_1, L_2, L_3 at one snapshot (the source is shared).
std::array<Spectrum, 3> leray_spectra(Jet& jet, TermForm form, const IterationConfig& cfg);
/// Source of the Leray term in the configured convention (before K_{,i}).
Spectrum leray_source(Jet& jet, TermForm form, const IterationConfig& cfg);

IterationState init_step0(const IterationConfig& cfg);
VectorField baseline(const IterationState& state, std::size_t node);
VectorField increment(const IterationState& state, std::size_t node);

ScalarSlab burgers_term(const IterationState& state, int i, TermForm form, const IterationConfig& cfg);
ScalarSlab leray_term(const IterationState& state, int i, TermForm form, const IterationConfig& cfg);

/// One fixed-point update; first-step forms when state.k == 0.
IterationState step(IterationState state, const IterationConfig& cfg);
/// init_step0 followed by kmax updates.
IterationState iterate(const IterationConfig& cfg);

struct ContractionTrial {
  double T = 0.0;
  bool contracting = false;
  double max_ratio = 0.0;
  double richardson_rel = 0.0;
  std::string note;
  std::vector<NormRecord> records;
};

struct ContractionResult {
  double T_measured = 0.0;
  bool trivially_contracting = false;
  std::vector<NormRecord> records;
  std::vector<ContractionTrial> trials;
};

/// Runs the scheme at a single horizon and classifies it.
ContractionTrial contraction_trial(const IterationConfig& cfg);
/// Grows the horizon from cfg.T while every ratio stays <= 1/2, then bisects
/// the bracket; shrinks instead when cfg.T fails. Throws NoContraction when no
/// tested horizon contracts.
ContractionResult run_contraction(const IterationConfig& cfg, int bisection_steps = 3, int max_doublings = 4,
                                  int max_halvings = 6);

struct LimitRow {
  double nu = 0.0;
  double eps = 0.0;
  bool contracting = false;
  double max_ratio = 0.0;
  double sup_incr = 0.0;
  std::optional<double> diff_to_previous;
};

struct LimitResult {
  double T = 0.0;
  std::vector<LimitRow> rows;
  /// nullopt for a single-pair schedule.
  std::optional<bool> cauchy;
  VectorSlab limit;
  std::vector<VectorField> increments_at_T;
  std::vector<NormRecord> limit_records;
};

/// Runs the scheme for each (nu, eps) pair at the shared horizon cfg.T and
/// tabulates sup-norm differences of the increments at t = T.
LimitResult viscosity_limit_drive(const IterationConfig& cfg, const std::vector<double>& nus,
                                  const std::vector<double>& epss);

/// -nu Lap v componentwise.
VectorField navier_force_term(const VectorField& v, double nu);

/// Max over interior points (inner half of the box) of the spectral divergence.
double max_divergence(const VectorField& v);

}  // namespace reveuler
