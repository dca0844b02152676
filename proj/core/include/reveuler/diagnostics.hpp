#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reveuler/data_fields.hpp"
#include "reveuler/grid.hpp"
#include "reveuler/iteration.hpp"
#include "reveuler/norms.hpp"

namespace reveuler {

/// Spectral curl.
VectorField vorticity(const VectorField& v);

/// max over time nodes of the delta = 1 quotient (a finite-difference Lipschitz constant).
double lipschitz_estimate(const ScalarSlab& slab, const HolderPairs& pairs = {});

/// Fitted exponent of max |f(x + d e_axis) - f(x)| against d over pairs
/// straddling the plane x_axis = 0, three dyadic gaps from n/16 cells up. Fields
/// with no variation report 1.
double holder_exponent_estimate(const ScalarField& f, Axis axis = 0);

enum class Trend { Bounded, Growing };
std::string to_string(Trend t);

/// Per-point magnitudes fed to the slab scan.
struct SlabFields {
  ScalarField omega1;  // |omega_1|
  ScalarField grad_v2;  // |grad v_2|
  ScalarField grad_v3;  // |grad v_3|
  ScalarField v1;       // |v_1|
};

/// Spectral derivatives of a grid velocity.
SlabFields slab_fields(const VectorField& v);
/// Closed-form Jacobian of the planar data on the grid (cells with x1 = 0 skipped).
SlabFields slab_fields(const GridSpec& grid, const Params& p);

struct SlabRow {
  double r = 0.0;
  double sup_omega1 = 0.0;
  double sup_grad_v2 = 0.0;
  double sup_grad_v3 = 0.0;
  double sup_v1 = 0.0;
};

struct SlabQuantityTrend {
  double slope = 0.0;  // log-log slope of the sup against r
  Trend trend = Trend::Bounded;
  /// Trends along each sampled (x2, x3) line; `uniform` when all agree with `trend`.
  std::vector<double> line_slopes;
  bool uniform = false;
};

struct SlabProfile {
  std::vector<SlabRow> rows;
  std::vector<std::pair<double, double>> lines;  // sampled (x2, x3)
  SlabQuantityTrend omega1;
  SlabQuantityTrend grad_v2;
  SlabQuantityTrend grad_v3;
  SlabQuantityTrend v1;
};

inline constexpr double kGrowthSlope = -0.05;
/// Slopes are fitted over this many of the smallest radii.
inline constexpr std::size_t kSlabFitRadii = 3;

/// Sup of each magnitude over the shells r/2 < |x1| <= r for the given
/// descending radii, plus the same along `lines` sampled (x2, x3) grid lines.
SlabProfile singular_slab_scan(const SlabFields& f, const std::vector<double>& radii, int lines = 8,
                               std::uint64_t seed = 7);
/// Dyadic radii from R/2 down to the smallest shell that still holds a cell.
std::vector<double> default_slab_radii(const GridSpec& g);

/// sup over |gamma| <= m of finite-difference y-derivatives after resampling
/// onto y_j = arctan(x_j). Throws CertificateMissing unless the field decays at
/// order >= 2m on spheres inside the box.
double compactify_check(const ScalarField& f, int m);
double compactify_check(const VectorField& v, int m);

/// (K_{,i} * source)(x), K = -1/(4 pi |x|), by direct quadrature: spherical
/// near field on cubic-interpolated samples inside a smooth cutoff of radius
/// `near_cells` spacings, cell sum outside. The residual feeds it a source
/// upsampled by 2.
Vec3 leray_grad_quadrature(const ScalarField& source, const Point3& x, double near_cells = 8.0);

/// sum_{m,j} v_{m,j} v_{j,m} from spectral derivatives.
ScalarField pressure_source(const VectorField& v);

enum class TimeDirection { Reversed, Forward };

struct ResidualOptions {
  /// Interior node at which the centred difference is taken; < 0 picks the
  /// second to last node.
  int node = -1;
  /// Physical pressure gradient provider; empty uses the direct quadrature.
  std::function<Vec3(const Point3&, double)> pressure_gradient;
  TimeDirection direction = TimeDirection::Reversed;
  double near_cells = 8.0;
};

/// max over probes and components of |d_t v - (v . grad) v - grad p|
/// (reversed) or |d_t v + (v . grad) v + grad p| (forward).
double reversed_euler_residual(const VectorSlab& slab, const std::vector<Point3>& probes,
                               const ResidualOptions& opts = {});

/// Probes on a lattice in [-a, a]^3 with |x1| >= min_x1.
std::vector<Point3> residual_probes(double half, int per_axis, double min_x1);

struct DecayRecord {
  std::string name;
  DecayCertificate cert;
};

struct ResidualPoint {
  int n = 0;
  double residual = 0.0;
};

struct DiagnosticsReport {
  std::map<std::string, double> holder_exponents;
  double lipschitz_B = 0.0;
  double lipschitz_L = 0.0;
  double M2 = 0.0;
  std::vector<NormRecord> contraction;
  SlabProfile singular_slab_profile;
  double compactified_sup = 0.0;
  std::vector<DecayRecord> decay;
  std::vector<ResidualPoint> residual_trend;
  std::vector<LimitRow> limit_table;
  std::optional<bool> cauchy;
  double T = 0.0;
};

std::string report_json(const DiagnosticsReport& r);
std::string contraction_csv(const std::vector<NormRecord>& records);
std::string slab_profile_csv(const SlabProfile& p);
std::string limit_table_csv(const std::vector<LimitRow>& rows);
std::string residual_csv(const std::vector<ResidualPoint>& rows);
std::string norm_record_jsonl(const NormRecord& r);

/// Inverses of report_json and norm_record_jsonl; "divergent" reads back as +inf.
/// Throws Io on malformed input.
DiagnosticsReport parse_report_json(const std::string& text);
NormRecord parse_norm_record_jsonl(const std::string& line);

}  // namespace reveuler
