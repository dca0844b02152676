#include "reveuler/data_fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "reveuler/error.hpp"

namespace reveuler {

std::string to_string(Family f) { return f == Family::Planar ? "planar" : "radial"; }

Family family_from_string(const std::string& s) {
  if (s == "planar") return Family::Planar;
  if (s == "radial") return Family::Radial;
  throw Error(ErrorKind::Validation, "unknown family '" + s + "' (expected planar|radial)");
}

std::string to_string(H3Variant v) { return v == H3Variant::Consistent ? "consistent" : "displayed"; }

H3Variant h3_variant_from_string(const std::string& s) {
  if (s == "consistent") return H3Variant::Consistent;
  if (s == "displayed") return H3Variant::Displayed;
  throw Error(ErrorKind::Validation, "unknown h3 variant '" + s + "' (expected consistent|displayed)");
}

std::vector<std::string> Params::validate() const {
  std::vector<std::string> warnings;
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Validation, msg); };
  if (!std::isfinite(alpha0) || !std::isfinite(beta0)) fail("exponents must be finite");
  if (!(alpha0 > 0.0 && alpha0 < 0.5)) {
    std::ostringstream os;
    os << "alpha0 = " << alpha0 << " outside (0, 0.5)";
    fail(os.str());
  }
  if (family == Family::Planar) {
    if (!(beta0 > 1.5 && beta0 < 1.5 + alpha0)) {
      std::ostringstream os;
      os << "beta0 = " << beta0 << " outside (1.5, 1.5 + alpha0) = (1.5, " << 1.5 + alpha0 << ")";
      fail(os.str());
    }
  } else {
    if (!(beta0 > 1.5)) {
      std::ostringstream os;
      os << "beta0 = " << beta0 << " must exceed 1.5 for the radial family";
      fail(os.str());
    }
    if (beta0 >= 1.0 + alpha0) {
      std::ostringstream os;
      os << "radial family: beta0 = " << beta0 << " >= 1 + alpha0 = " << 1.0 + alpha0
         << "; the range 1.5 < beta0 < 1 + alpha0 is empty for alpha0 < 0.5";
      warnings.push_back(os.str());
    }
  }
  return warnings;
}

Profile oscillatory_profile(double s, double alpha0, double beta0) {
  if (s == 0.0) return {0.0, 0.0, std::numeric_limits<double>::infinity()};
  const double a = std::abs(s);
  const double osc = std::pow(a, -alpha0);
  const double sn = std::sin(osc);
  const double cs = std::cos(osc);
  const double pb = std::pow(a, beta0);
  // G(a) = a^b sin(a^-a0) and derivatives in a.
  const double g = pb * sn;
  const double g1 = beta0 * pb / a * sn - alpha0 * pb / a * osc * cs;
  const double g2 = beta0 * (beta0 - 1.0) * pb / (a * a) * sn - alpha0 * beta0 * pb / (a * a) * osc * cs -
                    alpha0 * (beta0 - 1.0 - alpha0) * pb / (a * a) * osc * cs -
                    alpha0 * alpha0 * pb / (a * a) * osc * osc * sn;
  // Signed powers: sign(s)|s|^b * sin(sign(s)|s|^-a0) = G(|s|) for both signs.
  if (s > 0.0) return {g, g1, g2};
  return {g, -g1, g2};
}

namespace {

struct Weights {
  double a1, a2, a3;     // (1 + x_i^2)^-2
  double q1, q2, q3;     // d_i log a_i = -4 x_i / (1 + x_i^2)
  double dq1;            // d_1 q1
  double c, dc;          // -2 x3 / (1 + x3^2)^3 and its x3-derivative
};

Weights weights(const Point3& x) {
  Weights w{};
  const double s1 = 1.0 + x.x1 * x.x1;
  const double s2 = 1.0 + x.x2 * x.x2;
  const double s3 = 1.0 + x.x3 * x.x3;
  w.a1 = 1.0 / (s1 * s1);
  w.a2 = 1.0 / (s2 * s2);
  w.a3 = 1.0 / (s3 * s3);
  w.q1 = -4.0 * x.x1 / s1;
  w.q2 = -4.0 * x.x2 / s2;
  w.q3 = -4.0 * x.x3 / s3;
  w.dq1 = -4.0 * (1.0 - x.x1 * x.x1) / (s1 * s1);
  w.c = -2.0 * x.x3 / (s3 * s3 * s3);
  w.dc = (10.0 * x.x3 * x.x3 - 2.0) / (s3 * s3 * s3 * s3);
  return w;
}

void require_planar(const Params& p) {
  if (p.family != Family::Planar) throw Error(ErrorKind::Validation, "planar data requested with radial params");
}

void require_radial(const Params& p) {
  if (p.family != Family::Radial) throw Error(ErrorKind::Validation, "radial data requested with planar params");
}

}  // namespace

double eval_phi(const Point3& x) {
  const Weights w = weights(x);
  return w.c * w.a1 * w.a2;
}

Components eval_h(const Point3& x, const Params& p) {
  require_planar(p);
  if (x.x1 == 0.0) return {0.0, 0.0, 0.0};
  const Weights w = weights(x);
  const Profile g = oscillatory_profile(x.x1, p.alpha0, p.beta0);
  const double psi = w.a1 * w.a2 * w.a3;
  const double g1 = g.d1 + g.value * w.q1;  // d_1(g a1) / a1
  const double h1 = g.value * w.a1 * w.a2 * w.c;
  const double h2 = -x.x2 * g1 * w.a1 * w.a2 * w.c;
  double h3 = 0.0;
  const double s2 = 1.0 + x.x2 * x.x2;
  if (p.h3_variant == H3Variant::Consistent) {
    h3 = -2.0 * x.x2 * x.x2 / s2 * g1 * psi;
  } else {
    const double s1 = 1.0 + x.x1 * x.x1;
    const double big_a = -x.x2 * x.x2 / s2;
    const double big_b = 4.0 * x.x1 * x.x2 * x.x2 / (s1 * s2 * s2);
    h3 = psi * (big_a * g.d1 + big_b * g.value);
  }
  return {h1, h2, h3};
}

Mat3 eval_grad_h(const Point3& x, const Params& p) {
  require_planar(p);
  if (std::abs(x.x1) < std::numeric_limits<double>::min()) {
    throw Error(ErrorKind::SingularPoint,
                "grad h on x1 = 0: entries (2,1) and (3,1) diverge like |x1|^(beta0-2-2alpha0)");
  }
  const Weights w = weights(x);
  const Profile g = oscillatory_profile(x.x1, p.alpha0, p.beta0);
  const double psi = w.a1 * w.a2 * w.a3;
  const double g1 = g.d1 + g.value * w.q1;
  const double dg1 = g.d2 + g.d1 * w.q1 + g.value * w.dq1;
  const double a12 = w.a1 * w.a2;

  Mat3 m{};
  m[0] = {g1 * a12 * w.c, g.value * w.a1 * w.q2 * w.a2 * w.c, g.value * a12 * w.dc};
  m[1] = {-x.x2 * (dg1 + g1 * w.q1) * a12 * w.c, -g1 * a12 * w.c * (1.0 + x.x2 * w.q2),
          -x.x2 * g1 * a12 * w.dc};

  const double s2 = 1.0 + x.x2 * x.x2;
  if (p.h3_variant == H3Variant::Consistent) {
    const double pp = -2.0 * x.x2 * x.x2 / s2;
    const double dpp = -4.0 * x.x2 / (s2 * s2);
    m[2] = {pp * (dg1 + g1 * w.q1) * psi, (dpp + pp * w.q2) * g1 * psi, pp * g1 * psi * w.q3};
  } else {
    const double s1 = 1.0 + x.x1 * x.x1;
    const double big_a = -x.x2 * x.x2 / s2;
    const double d_big_a = -2.0 * x.x2 / (s2 * s2);
    const double big_b = 4.0 * x.x1 * x.x2 * x.x2 / (s1 * s2 * s2);
    const double d1_big_b = 4.0 * x.x2 * x.x2 / (s2 * s2) * (1.0 - x.x1 * x.x1) / (s1 * s1);
    const double d2_big_b = 4.0 * x.x1 / s1 * 2.0 * x.x2 * (1.0 - x.x2 * x.x2) / (s2 * s2 * s2);
    const double q = big_a * g.d1 + big_b * g.value;
    m[2] = {psi * (w.q1 * q + big_a * g.d2 + d1_big_b * g.value + big_b * g.d1),
            psi * (w.q2 * q + d_big_a * g.d1 + d2_big_b * g.value), psi * w.q3 * q};
  }
  return m;
}

double divergence_h(const Point3& x, const Params& p) {
  const Mat3 m = eval_grad_h(x, p);
  return m[0][0] + m[1][1] + m[2][2];
}

namespace {

struct RadialProfile {
  double s;   // S(r)
  double ds;  // S'(r)
};

RadialProfile radial_profile(double r, const Params& p) {
  const Profile g = oscillatory_profile(r, p.alpha0, p.beta0);
  const double s = 1.0 + r * r;
  return {g.value / (s * s), g.d1 / (s * s) - 4.0 * r * g.value / (s * s * s)};
}

}  // namespace

Components eval_f(const Point3& x, const Params& p) {
  require_radial(p);
  const double r = x.norm();
  if (r == 0.0) return {0.0, 0.0, 0.0};
  const double s = radial_profile(r, p).s;
  return {x.x2 * x.x3 * s, -0.5 * x.x1 * x.x3 * s, -0.5 * x.x1 * x.x2 * s};
}

Mat3 eval_grad_f(const Point3& x, const Params& p) {
  require_radial(p);
  const double r = x.norm();
  if (r == 0.0) return Mat3{};
  const RadialProfile rp = radial_profile(r, p);
  const Vec3 mono{x.x2 * x.x3, -0.5 * x.x1 * x.x3, -0.5 * x.x1 * x.x2};
  const Mat3 dmono{{{0.0, x.x3, x.x2}, {-0.5 * x.x3, 0.0, -0.5 * x.x1}, {-0.5 * x.x2, -0.5 * x.x1, 0.0}}};
  Mat3 m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = dmono[i][j] * rp.s + mono[i] * rp.ds * x[j] / r;
  }
  return m;
}

double divergence_f(const Point3& x, const Params& p) {
  const Mat3 m = eval_grad_f(x, p);
  return m[0][0] + m[1][1] + m[2][2];
}

Components eval_data(const Point3& x, const Params& p) {
  return p.family == Family::Planar ? eval_h(x, p) : eval_f(x, p);
}

Mat3 eval_grad_data(const Point3& x, const Params& p) {
  return p.family == Family::Planar ? eval_grad_h(x, p) : eval_grad_f(x, p);
}

namespace {

std::vector<Point3> fibonacci_sphere(std::size_t count) {
  std::vector<Point3> pts;
  pts.reserve(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(count);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double th = golden * static_cast<double>(k);
    pts.push_back({rho * std::cos(th), rho * std::sin(th), z});
  }
  return pts;
}

// 4th-order central difference of order (o0, o1, o2) with total order <= 2.
double fd_derivative(const ScalarEvaluator& f, const Point3& x, std::array<int, 3> order, double h) {
  static constexpr std::array<double, 4> d1_off{-2.0, -1.0, 1.0, 2.0};
  static constexpr std::array<double, 4> d1_w{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
  static constexpr std::array<double, 5> d2_off{-2.0, -1.0, 0.0, 1.0, 2.0};
  static constexpr std::array<double, 5> d2_w{-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};
  std::vector<Axis> axes;
  for (Axis a = 0; a < 3; ++a) {
    for (int k = 0; k < order[a]; ++k) axes.push_back(a);
  }
  if (axes.empty()) return f(x);
  if (axes.size() == 1) {
    double acc = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      Point3 y = x;
      y[axes[0]] += d1_off[k] * h;
      acc += d1_w[k] * f(y);
    }
    return acc / h;
  }
  if (axes[0] == axes[1]) {
    double acc = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
      Point3 y = x;
      y[axes[0]] += d2_off[k] * h;
      acc += d2_w[k] * f(y);
    }
    return acc / (h * h);
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t l = 0; l < 4; ++l) {
      Point3 y = x;
      y[axes[0]] += d1_off[k] * h;
      y[axes[1]] += d1_off[l] * h;
      acc += d1_w[k] * d1_w[l] * f(y);
    }
  }
  return acc / (h * h);
}

}  // namespace

DecayCertificate certify_decay(const ScalarEvaluator& field, int l, int m, std::span<const double> radii) {
  if (radii.size() < 3) throw Error(ErrorKind::InsufficientSamples, "certify_decay needs at least 3 radii");
  if (m < 0 || m > 2) throw Error(ErrorKind::Validation, "certify_decay supports derivative orders 0..2");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (radii[k] < 1.0) throw Error(ErrorKind::Validation, "certify_decay radii must be >= 1");
    if (k > 0 && radii[k] <= radii[k - 1]) throw Error(ErrorKind::Validation, "certify_decay radii must ascend");
  }

  std::vector<std::array<int, 3>> multi;
  for (int a = 0; a <= m; ++a) {
    for (int b = 0; a + b <= m; ++b) {
      for (int c = 0; a + b + c <= m; ++c) multi.push_back({a, b, c});
    }
  }

  const auto sphere = fibonacci_sphere(6000);
  DecayCertificate cert{l, m, std::numeric_limits<double>::infinity(), 0.0, false};
  for (const auto& gamma : multi) {
    std::vector<double> log_r;
    std::vector<double> log_sup;
    bool all_zero = true;
    for (double radius : radii) {
      const double h = 1e-3 * radius;
      double sup = 0.0;
      for (const Point3& u : sphere) sup = std::max(sup, std::abs(fd_derivative(field, radius * u, gamma, h)));
      if (sup > 0.0) all_zero = false;
      cert.max_ratio_constant = std::max(cert.max_ratio_constant, sup * (1.0 + std::pow(radius, l)));
      log_r.push_back(std::log(radius));
      log_sup.push_back(std::log(std::max(sup, std::numeric_limits<double>::min())));
    }
    if (all_zero) continue;
    const double n = static_cast<double>(log_r.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < log_r.size(); ++k) {
      mx += log_r[k] / n;
      my += log_sup[k] / n;
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < log_r.size(); ++k) {
      sxy += (log_r[k] - mx) * (log_sup[k] - my);
      sxx += (log_r[k] - mx) * (log_r[k] - mx);
    }
    cert.fitted_exponent = std::min(cert.fitted_exponent, -sxy / sxx);
  }
  cert.holds = cert.fitted_exponent >= static_cast<double>(l) - kDecayFitTolerance;
  return cert;
}

}  // namespace reveuler
