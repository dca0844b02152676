#pragma once

// Closed-form singular-oscillatory data: the planar family h = (h1, h2, h3)
// with its weight function, the radial family f, analytic Jacobians, and the
// polynomial-decay certification used to justify periodic truncation.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "reveuler/geometry.hpp"

namespace reveuler {

enum class Family { Planar, Radial };

/// Which closed form is used for h3. `Consistent` is the divergence-free
/// completion (h3,3 = x2 h1,12); `Displayed` is the literal printed formula.
enum class H3Variant { Consistent, Displayed };

std::string to_string(Family f);
Family family_from_string(const std::string& s);
std::string to_string(H3Variant v);
H3Variant h3_variant_from_string(const std::string& s);

struct Params {
  double alpha0 = 0.4;
  double beta0 = 1.8;
  Family family = Family::Planar;
  H3Variant h3_variant = H3Variant::Consistent;

  /// beta0 - 1 - alpha0: exponent of the oscillatory term of d1 h1.
  [[nodiscard]] double gamma() const noexcept { return beta0 - 1.0 - alpha0; }
  /// 2 beta0 - 3: upper end of the admissible Hoelder exponents of the first increment.
  [[nodiscard]] double holder_delta() const noexcept { return 2.0 * beta0 - 3.0; }

  /// Throws Error(Validation) when the exponents leave the admissible box.
  /// Returns human-readable warnings (radial family with beta0 >= 1 + alpha0).
  std::vector<std::string> validate() const;

  friend bool operator==(const Params&, const Params&) = default;
};

/// Components (h1, h2, h3) or (f1, f2, f3).
using Components = Vec3;

double eval_phi(const Point3& x);
Components eval_h(const Point3& x, const Params& p);
/// Entry (i, j) is dh_i/dx_j. Throws SingularPoint on x1 == 0, where the
/// (2,1) and (3,1) entries diverge like |x1|^(beta0 - 2 - 2 alpha0).
Mat3 eval_grad_h(const Point3& x, const Params& p);
double divergence_h(const Point3& x, const Params& p);

Components eval_f(const Point3& x, const Params& p);
Mat3 eval_grad_f(const Point3& x, const Params& p);
double divergence_f(const Point3& x, const Params& p);

/// Dispatches on p.family.
Components eval_data(const Point3& x, const Params& p);
Mat3 eval_grad_data(const Point3& x, const Params& p);

/// The scalar oscillatory profile s -> sign(s)|s|^b sin(sign(s)|s|^-a) and its
/// first two derivatives (signed-power convention for s < 0).
struct Profile {
  double value;
  double d1;
  double d2;
};
Profile oscillatory_profile(double s, double alpha0, double beta0);

using ScalarEvaluator = std::function<double(const Point3&)>;

struct DecayCertificate {
  int l = 0;
  int m = 0;
  double fitted_exponent = 0.0;
  double max_ratio_constant = 0.0;
  bool holds = false;
};

inline constexpr double kDecayFitTolerance = 0.25;

/// Log-log fit of sup_{|x|=R} |D^gamma field| against R for all |gamma| <= m.
/// Derivatives are 4th-order central differences; m <= 2.
DecayCertificate certify_decay(const ScalarEvaluator& field, int l, int m, std::span<const double> radii);

}  // namespace reveuler
