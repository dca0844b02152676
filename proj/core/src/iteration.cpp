#include "reveuler/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reveuler/convolution.hpp"
#include "reveuler/error.hpp"

namespace reveuler {

std::string to_string(TermForm f) { return f == TermForm::FirstStep ? "first_step" : "rewritten"; }

std::string to_string(LerayConvention c) { return c == LerayConvention::Physical ? "physical" : "literal"; }

LerayConvention leray_convention_from_string(const std::string& s) {
  if (s == "physical") return LerayConvention::Physical;
  if (s == "literal") return LerayConvention::Literal;
  throw Error(ErrorKind::Validation, "unknown Leray convention '" + s + "' (expected physical|literal)");
}

std::string to_string(LastProduct c) { return c == LastProduct::V3 ? "v3" : "v2"; }

LastProduct last_product_from_string(const std::string& s) {
  if (s == "v3") return LastProduct::V3;
  if (s == "v2") return LastProduct::V2;
  throw Error(ErrorKind::Validation, "unknown compatibility variant '" + s + "' (expected v2|v3)");
}

void IterationConfig::validate() const {
  if (!zero_data) params.validate();
  grid.validate();
  if (!(nu > 0.0) || !std::isfinite(nu)) throw Error(ErrorKind::Validation, "nu must be > 0");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::Validation, "eps must be >= 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::Validation, "horizon T must be > 0");
  if (kmax < 2) throw Error(ErrorKind::Validation, "kmax must be >= 2");
  if (nsteps_time < 2) throw Error(ErrorKind::Validation, "need at least 2 time intervals");
  if (!(time_grading >= 1.0)) throw Error(ErrorKind::Validation, "time grading ratio must be >= 1");
  if (!(richardson_tol > 0.0)) throw Error(ErrorKind::Validation, "Richardson tolerance must be > 0");
  if (holder_delta > 1.0) throw Error(ErrorKind::Validation, "Hoelder exponent must be <= 1");
}

double IterationConfig::effective_delta() const {
  return holder_delta > 0.0 ? holder_delta : 0.5 * params.holder_delta();
}

namespace {

constexpr std::size_t idx(int i, Axis j) { return static_cast<std::size_t>(3 * i + j); }

bool avoided(int i, Axis j) { return j == 0 && (i == 1 || i == 2); }

Spectrum product(const ScalarField& a, const ScalarField& b, bool dealias) {
  Spectrum s = forward(multiply(a, b));
  if (dealias) apply_dealias(s);
  return s;
}

// G_eps * s, optionally followed by d_1.
Spectrum mollified(Spectrum s, double eps, bool d1) {
  if (eps > 0.0) apply_heat(s, eps);
  if (d1) apply_derivative(s, 0);
  return s;
}

void check_finite(const ScalarField& f, int k, std::size_t node, std::size_t comp) {
  if (!f.all_finite()) {
    throw Error(ErrorKind::NonFiniteField, "non-finite values in v(" + std::to_string(k) + ") component " +
                                               std::to_string(comp + 1) + " at time node " + std::to_string(node));
  }
}

}  // namespace

Jet::Jet(const VectorField& v, bool guard_avoided, bool dealias) : guard_(guard_avoided), dealias_(dealias) {
  for (std::size_t i = 0; i < 3; ++i) {
    spec_[i] = forward(v.c[i]);
    if (dealias_) {
      apply_dealias(spec_[i]);
      field_[i] = inverse(spec_[i]);
    } else {
      field_[i] = v.c[i];
    }
  }
}

const ScalarField& Jet::d(int i, Axis j) {
  if (guard_ && avoided(i, j)) {
    throw Error(ErrorKind::MissingDerivative, "first-step forms must not read v_{" + std::to_string(i + 1) + "," +
                                                  std::to_string(j + 1) + "}");
  }
  auto& slot = d_[idx(i, j)];
  if (!slot) {
    Spectrum s = spec_[static_cast<std::size_t>(i)];
    apply_derivative(s, j);
    slot = inverse(s);
  }
  return *slot;
}

ScalarField Jet::dd(int i, Axis j, Axis l) const {
  Spectrum s = spec_[static_cast<std::size_t>(i)];
  apply_derivative(s, j);
  apply_derivative(s, l);
  return inverse(s);
}

Spectrum burgers_spectrum(Jet& jet, int i, TermForm form, const IterationConfig& cfg) {
  const bool da = jet.dealias();
  if (i == 0) {
    // v_1 v_{1,1} + v_2 v_{1,2} + v_3 v_{1,3}, no mollification.
    Spectrum s = product(jet.v(0), jet.d(0, 0), da);
    s += product(jet.v(1), jet.d(0, 1), da);
    s += product(jet.v(2), jet.d(0, 2), da);
    return s;
  }
  Spectrum s(jet.v(0).grid());
  if (form == TermForm::FirstStep) {
    s += mollified(product(jet.v(0), jet.v(i), da), cfg.eps, true);
    s -= mollified(product(jet.d(0, 0), jet.v(i), da), cfg.eps, false);
  } else {
    s += mollified(product(jet.v(0), jet.d(i, 0), da), cfg.eps, false);
  }
  s += product(jet.v(1), jet.d(i, 1), da);
  s += product(jet.v(2), jet.d(i, 2), da);
  return s;
}

Spectrum leray_source(Jet& jet, TermForm form, const IterationConfig& cfg) {
  const bool da = jet.dealias();
  Spectrum diag = product(jet.d(0, 0), jet.d(0, 0), da);
  diag += product(jet.d(1, 1), jet.d(1, 1), da);
  diag += product(jet.d(2, 2), jet.d(2, 2), da);
  Spectrum cross = product(jet.d(1, 2), jet.d(2, 1), da);
  if (form == TermForm::FirstStep) {
    // v_{1,2} v_{2,1} = d_1(v_{1,2} v_2) - v_{1,2,1} v_2, same for index 3.
    const ScalarField v121 = jet.dd(0, 1, 0);
    const ScalarField v131 = jet.dd(0, 2, 0);
    const ScalarField& last = cfg.last_product == LastProduct::V3 ? jet.v(2) : jet.v(1);
    cross += mollified(product(jet.d(0, 1), jet.v(1), da), cfg.eps, true);
    cross -= mollified(product(v121, jet.v(1), da), cfg.eps, false);
    cross += mollified(product(jet.d(0, 2), jet.v(2), da), cfg.eps, true);
    cross -= mollified(product(v131, last, da), cfg.eps, false);
  } else {
    cross += mollified(product(jet.d(0, 1), jet.d(1, 0), da), cfg.eps, false);
    cross += mollified(product(jet.d(0, 2), jet.d(2, 0), da), cfg.eps, false);
  }
  if (cfg.leray == LerayConvention::Physical) {
    // sum_{m,j} v_{m,j} v_{j,m}: diagonal once, each off-diagonal pair twice.
    cross *= 2.0;
    diag += cross;
    return diag;
  }
  diag += cross;
  diag *= 2.0;
  return diag;
}

std::array<Spectrum, 3> leray_spectra(Jet& jet, TermForm form, const IterationConfig& cfg) {
  const Spectrum src = leray_source(jet, form, cfg);
  const double sign = cfg.leray == LerayConvention::Physical ? -1.0 : 1.0;
  std::array<Spectrum, 3> out;
  for (Axis i = 0; i < 3; ++i) {
    out[static_cast<std::size_t>(i)] = src;
    apply_leray_grad(out[static_cast<std::size_t>(i)], i);
    out[static_cast<std::size_t>(i)] *= sign;
  }
  return out;
}

IterationState init_step0(const IterationConfig& cfg) {
  cfg.validate();
  IterationState st;
  st.nu = cfg.nu;
  st.guard_avoided = true;
  VectorField h(cfg.grid);
  if (!cfg.zero_data) {
    const Params p = cfg.params;
    for (std::size_t k = 0; k < cfg.grid.size(); ++k) {
      const auto c = eval_data(cfg.grid.point(k), p);
      h.c[0][k] = c[0];
      h.c[1][k] = c[1];
      h.c[2][k] = c[2];
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    st.data[i] = forward(h.c[i]);
    if (cfg.dealias) apply_dealias(st.data[i]);
  }
  st.v.times = cfg.time_nodes();
  for (std::size_t n = 0; n < st.v.times.size(); ++n) st.v.fields.push_back(baseline(st, n));
  NormRecord rec0;
  for (std::size_t n = 1; n < st.v.fields.size(); ++n) {
    rec0.max_divergence = std::max(rec0.max_divergence, max_divergence(st.v.fields[n]));
  }
  st.norm_history.push_back(rec0);
  return st;
}

VectorField baseline(const IterationState& state, std::size_t node) {
  const double t = state.v.times.at(node);
  VectorField out;
  for (std::size_t i = 0; i < 3; ++i) {
    Spectrum s = state.data[i];
    apply_heat(s, state.nu * t);
    out.c[i] = inverse(s);
  }
  return out;
}

VectorField increment(const IterationState& state, std::size_t node) {
  return state.v.fields.at(node) - baseline(state, node);
}

ScalarSlab burgers_term(const IterationState& state, int i, TermForm form, const IterationConfig& cfg) {
  ScalarSlab out;
  out.times = state.v.times;
  for (const auto& f : state.v.fields) {
    Jet jet(f, form == TermForm::FirstStep, cfg.dealias);
    out.fields.push_back(inverse(burgers_spectrum(jet, i, form, cfg)));
  }
  return out;
}

ScalarSlab leray_term(const IterationState& state, int i, TermForm form, const IterationConfig& cfg) {
  ScalarSlab out;
  out.times = state.v.times;
  for (const auto& f : state.v.fields) {
    Jet jet(f, form == TermForm::FirstStep, cfg.dealias);
    out.fields.push_back(inverse(leray_spectra(jet, form, cfg)[static_cast<std::size_t>(i)]));
  }
  return out;
}

double max_divergence(const VectorField& v) {
  ScalarField div(v.grid());
  for (Axis j = 0; j < 3; ++j) div += spectral_derivative(v.c[static_cast<std::size_t>(j)], j);
  const GridSpec& g = v.grid();
  const double inner = 0.5 * g.half_width;
  double out = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point3 x = g.point(k);
    if (std::abs(x.x1) <= inner && std::abs(x.x2) <= inner && std::abs(x.x3) <= inner) {
      out = std::max(out, std::abs(div[k]));
    }
  }
  return out;
}

namespace {

struct SlabNorms {
  double sup = 0.0;
  double c1delta = 0.0;
  double h2 = 0.0;
};

SlabNorms slab_norms(const std::vector<VectorField>& fields, const IterationConfig& cfg) {
  SlabNorms out;
  const Box region = Box::cube(cfg.grid.half_width);
  const double delta = cfg.effective_delta();
  for (const auto& f : fields) {
    out.sup = std::max(out.sup, sup_norm(f));
    if (cfg.norm_kind != NormKind::GridH2) out.c1delta = std::max(out.c1delta, c1delta_norm(f, delta, region, cfg.holder));
    if (cfg.norm_kind != NormKind::SupC1delta) out.h2 = std::max(out.h2, grid_h2_norm(f));
  }
  return out;
}

double primary_ratio(const NormRecord& now, const NormRecord& before, NormKind kind) {
  auto ratio = [](double a, double b) {
    if (b == 0.0) return a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return a / b;
  };
  const double rc = ratio(now.holder_c1delta_diff, before.holder_c1delta_diff);
  const double rh = ratio(now.grid_h2_diff, before.grid_h2_diff);
  switch (kind) {
    case NormKind::SupC1delta: return rc;
    case NormKind::GridH2: return rh;
    case NormKind::Both: return std::max(rc, rh);
  }
  return std::max(rc, rh);
}

}  // namespace

IterationState step(IterationState state, const IterationConfig& cfg) {
  const TermForm form = state.k == 0 ? TermForm::FirstStep : TermForm::Rewritten;
  const GridSpec& g = state.grid();
  const std::size_t nodes = state.nodes();
  const std::size_t last = nodes - 1;
  std::array<DuhamelAccumulator, 3> fine{DuhamelAccumulator(g, cfg.nu), DuhamelAccumulator(g, cfg.nu),
                                         DuhamelAccumulator(g, cfg.nu)};
  std::array<DuhamelAccumulator, 3> coarse = fine;

  VectorSlab next;
  next.times = state.v.times;
  next.fields.reserve(nodes);
  std::array<ScalarField, 3> coarse_last;
  for (std::size_t n = 0; n < nodes; ++n) {
    Jet jet(state.v.fields[n], form == TermForm::FirstStep, cfg.dealias);
    auto leray = leray_spectra(jet, form, cfg);
    VectorField out = baseline(state, n);
    for (std::size_t i = 0; i < 3; ++i) {
      Spectrum f = burgers_spectrum(jet, static_cast<int>(i), form, cfg);
      f += leray[i];
      const bool coarse_node = n % 2 == 0 || n == last;
      if (coarse_node) coarse[i].push(state.v.times[n], f);
      fine[i].push(state.v.times[n], std::move(f));
      if (n > 0) out.c[i] += inverse(fine[i].integral());
      if (n == last) coarse_last[i] = inverse(coarse[i].integral());
      check_finite(out.c[i], state.k + 1, n, i);
    }
    next.fields.push_back(std::move(out));
  }

  NormRecord rec;
  rec.k = state.k + 1;
  {
    // Half-resolution Duhamel quadrature against the full one at t = T.
    const VectorField dv = next.fields[last] - baseline(state, last);
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      diff = std::max(diff, (dv.c[i] - coarse_last[i]).max_abs());
      scale = std::max(scale, dv.c[i].max_abs());
    }
    rec.richardson_rel = scale > 0.0 ? diff / scale : 0.0;
  }

  std::vector<VectorField> incr;
  std::vector<VectorField> diffs;
  for (std::size_t n = 1; n < nodes; ++n) {
    incr.push_back(next.fields[n] - baseline(state, n));
    diffs.push_back(next.fields[n] - state.v.fields[n]);
    rec.max_divergence = std::max(rec.max_divergence, max_divergence(next.fields[n]));
  }
  const SlabNorms ni = slab_norms(incr, cfg);
  const SlabNorms nd = slab_norms(diffs, cfg);
  rec.sup_incr = ni.sup;
  rec.holder_c1delta_incr = ni.c1delta;
  rec.grid_h2_incr = ni.h2;
  rec.sup_diff = nd.sup;
  rec.holder_c1delta_diff = nd.c1delta;
  rec.grid_h2_diff = nd.h2;
  if (state.k >= 1) {
    NormRecord& before = state.norm_history.back();
    before.contraction_ratio = primary_ratio(rec, before, cfg.norm_kind);
  }

  state.previous = std::move(state.v);
  state.v = std::move(next);
  state.k += 1;
  state.guard_avoided = false;
  state.norm_history.push_back(rec);
  return state;
}

IterationState iterate(const IterationConfig& cfg) {
  IterationState st = init_step0(cfg);
  for (int k = 0; k < cfg.kmax; ++k) st = step(std::move(st), cfg);
  return st;
}

ContractionTrial contraction_trial(const IterationConfig& cfg) {
  ContractionTrial trial;
  trial.T = cfg.T;
  try {
    const IterationState st = iterate(cfg);
    trial.records.assign(st.norm_history.begin() + 1, st.norm_history.end());
    trial.contracting = true;
    for (const auto& r : trial.records) {
      if (r.contraction_ratio) {
        trial.max_ratio = std::max(trial.max_ratio, *r.contraction_ratio);
        if (!(*r.contraction_ratio <= 0.5)) trial.contracting = false;
      }
    }
    trial.richardson_rel = trial.records.back().richardson_rel;
    if (trial.richardson_rel > cfg.richardson_tol) {
      trial.contracting = false;
      trial.note = "time slab too coarse (Richardson " + std::to_string(trial.richardson_rel) + ")";
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonFiniteField) throw;
    trial.contracting = false;
    trial.max_ratio = std::numeric_limits<double>::infinity();
    trial.note = e.what();
  }
  return trial;
}

ContractionResult run_contraction(const IterationConfig& cfg, int bisection_steps, int max_doublings,
                                  int max_halvings) {
  cfg.validate();
  if (cfg.kmax < 3) throw Error(ErrorKind::Validation, "run_contraction needs kmax >= 3");
  ContractionResult res;
  IterationConfig c = cfg;
  auto run = [&](double T) {
    c.T = T;
    res.trials.push_back(contraction_trial(c));
    return res.trials.back();
  };

  const ContractionTrial first = run(cfg.T);
  double good = 0.0;
  double bad = 0.0;
  if (first.contracting) {
    good = cfg.T;
    bool all_zero = true;
    for (const auto& r : first.records) all_zero = all_zero && r.sup_diff == 0.0;
    if (all_zero) {
      res.trivially_contracting = true;
      res.T_measured = cfg.T;
      res.records = first.records;
      return res;
    }
    for (int k = 0; k < max_doublings; ++k) {
      if (run(2.0 * good).contracting) {
        good *= 2.0;
      } else {
        bad = 2.0 * good;
        break;
      }
    }
  } else {
    bad = cfg.T;
    for (int k = 0; k < max_halvings; ++k) {
      if (run(0.5 * bad).contracting) {
        good = 0.5 * bad;
        break;
      }
      bad *= 0.5;
    }
    if (good == 0.0) throw Error(ErrorKind::NoContraction, "no tested horizon contracts");
  }
  if (bad > 0.0) {
    for (int k = 0; k < bisection_steps; ++k) {
      const double mid = std::sqrt(good * bad);
      if (run(mid).contracting) {
        good = mid;
      } else {
        bad = mid;
      }
    }
  }
  res.T_measured = good;
  for (const auto& t : res.trials) {
    if (t.T == good && t.contracting) res.records = t.records;
  }
  return res;
}

LimitResult viscosity_limit_drive(const IterationConfig& cfg, const std::vector<double>& nus,
                                  const std::vector<double>& epss) {
  if (nus.empty() || nus.size() != epss.size()) {
    throw Error(ErrorKind::Validation, "viscosity and mollifier schedules must be non-empty and of equal length");
  }
  for (std::size_t m = 1; m < nus.size(); ++m) {
    if (!(nus[m] < nus[m - 1]) || !(epss[m] <= epss[m - 1])) {
      throw Error(ErrorKind::Validation, "schedules must descend");
    }
  }
  LimitResult res;
  res.T = cfg.T;
  for (std::size_t m = 0; m < nus.size(); ++m) {
    IterationConfig c = cfg;
    c.nu = nus[m];
    c.eps = epss[m];
    IterationState st = iterate(c);
    LimitRow row;
    row.nu = c.nu;
    row.eps = c.eps;
    row.contracting = true;
    for (const auto& r : st.norm_history) {
      if (r.contraction_ratio) {
        row.max_ratio = std::max(row.max_ratio, *r.contraction_ratio);
        if (!(*r.contraction_ratio <= 0.5)) row.contracting = false;
      }
    }
    VectorField inc = increment(st, st.nodes() - 1);
    row.sup_incr = sup_norm(inc);
    if (!res.increments_at_T.empty()) row.diff_to_previous = sup_norm(inc - res.increments_at_T.back());
    res.increments_at_T.push_back(std::move(inc));
    res.rows.push_back(row);
    if (m + 1 == nus.size()) {
      res.limit = std::move(st.v);
      res.limit_records = std::move(st.norm_history);
    }
  }
  if (res.rows.size() >= 3) {
    bool dec = true;
    for (std::size_t m = 2; m < res.rows.size(); ++m) {
      dec = dec && *res.rows[m].diff_to_previous < *res.rows[m - 1].diff_to_previous;
    }
    res.cauchy = dec;
  } else if (res.rows.size() == 2) {
    res.cauchy = std::nullopt;
  }
  return res;
}

VectorField navier_force_term(const VectorField& v, double nu) {
  VectorField out;
  for (std::size_t i = 0; i < 3; ++i) out.c[i] = -nu * spectral_laplacian(v.c[i]);
  return out;
}

}  // namespace reveuler
