#include "reveuler/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "reveuler/diagnostics.hpp"
#include "reveuler/error.hpp"
#include "reveuler/field_io.hpp"
#include "reveuler/kernels.hpp"

namespace reveuler::cli {

using nlohmann::ordered_json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation:
    case ErrorKind::NoContraction:
    case ErrorKind::CertificateMissing:
    case ErrorKind::SingularPoint:
      return kExitCheckFailed;
    case ErrorKind::NotCauchy:
      return kExitNotCauchy;
    default:
      return kExitRuntimeFault;
  }
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + root_.string() + ": " + ec.message());
}

void OutputDir::write_text(const std::string& name, const std::string& text) const {
  std::ofstream out(root_ / name, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + (root_ / name).string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "short write to " + (root_ / name).string());
}

void OutputDir::write_field(const std::string& name, const VectorField& v) const { write_fld1(root_ / name, v); }

namespace {

ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return "divergent";
}

CheckItem below(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, value < threshold, std::move(detail)};
}

int report_checks(const std::vector<CheckItem>& items, std::ostream& log) {
  int failures = 0;
  for (const auto& c : items) {
    log << (c.pass ? "ok    " : "FAIL  ") << c.name << "  value=" << c.value << "  threshold=" << c.threshold;
    if (!c.detail.empty()) log << "  (" << c.detail << ")";
    log << '\n';
    if (!c.pass) ++failures;
  }
  return failures;
}

double fd4(const std::function<double(const Point3&)>& f, Point3 x, Axis j, double h) {
  auto at = [&](double s) {
    Point3 y = x;
    y[j] += s;
    return f(y);
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

std::string component_name(const Params& p, int i) {
  return std::string(p.family == Family::Planar ? "h" : "f") + std::to_string(i + 1);
}

std::vector<DecayRecord> data_decay(const Params& p) {
  const std::vector<double> radii{2, 4, 8, 16};
  std::vector<DecayRecord> out;
  for (int i = 0; i < 3; ++i) {
    const auto cert = certify_decay(
        [&](const Point3& x) { return eval_data(x, p)[static_cast<std::size_t>(i)]; }, 2, 0, radii);
    out.push_back({component_name(p, i), cert});
  }
  return out;
}

void write_config(const OutputDir& out, const RunConfig& cfg) { out.write_text("config.json", to_json_text(cfg)); }

}  // namespace

std::string checks_json(const std::vector<CheckItem>& items) {
  ordered_json arr = ordered_json::array();
  bool all = true;
  for (const auto& c : items) {
    arr.push_back({{"name", c.name}, {"value", num(c.value)}, {"threshold", num(c.threshold)}, {"pass", c.pass},
                   {"detail", c.detail}});
    all = all && c.pass;
  }
  return ordered_json{{"pass", all}, {"checks", arr}}.dump(2) + "\n";
}

std::vector<CheckItem> data_checks(const RunConfig& cfg) {
  const Params& p = cfg.iteration.params;
  p.validate();
  std::vector<CheckItem> items;
  std::mt19937_64 rng(cfg.seed);
  const double a = cfg.data.sample_half_width;
  std::uniform_real_distribution<double> u(-a, a);
  auto draw = [&](double min_x1) {
    for (;;) {
      const Point3 x{u(rng), u(rng), u(rng)};
      if (std::abs(x.x1) > min_x1) return x;
    }
  };

  double div = 0.0;
  for (std::size_t k = 0; k < cfg.data.divergence_points; ++k) {
    const Mat3 m = eval_grad_data(draw(cfg.data.min_abs_x1), p);
    div = std::max(div, std::abs(m[0][0] + m[1][1] + m[2][2]));
  }
  items.push_back(below("divergence", div, cfg.data.divergence_tol, "max |div| over sampled points"));

  double grad = 0.0;
  for (std::size_t k = 0; k < cfg.data.gradient_points; ++k) {
    const Point3 x = draw(0.05);
    const Mat3 m = eval_grad_data(x, p);
    const double step = 1e-3 * std::min(1.0, std::abs(x.x1));
    for (int i = 0; i < 3; ++i) {
      for (Axis j = 0; j < 3; ++j) {
        const double fd = fd4([&](const Point3& y) { return eval_data(y, p)[static_cast<std::size_t>(i)]; }, x, j, step);
        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        grad = std::max(grad, std::abs(fd - m[ui][uj]) / std::max(std::abs(m[ui][uj]), 1e-6));
      }
    }
  }
  items.push_back(below("gradient", grad, cfg.data.gradient_rel_tol, "relative error against 4th-order differences"));

  if (p.family == Family::Planar) {
    // Envelope of |d1 h1| over the crests of the oscillation near the plane.
    std::vector<double> lx, ly;
    for (int n = 3; n < 40; ++n) {
      const double x1 = std::pow(n * std::numbers::pi, -1.0 / p.alpha0);
      if (x1 < 1e-6 || x1 > 1e-2) continue;
      lx.push_back(std::log(x1));
      ly.push_back(std::log(std::abs(eval_grad_h({x1, 1, 1}, p)[0][0])));
    }
    const double slope = lx.size() >= 2 ? (ly.back() - ly.front()) / (lx.back() - lx.front()) : 0.0;
    items.push_back(below("holder_exponent_d1h1", std::abs(slope - p.gamma()), 0.05,
                          "crest envelope slope " + std::to_string(slope) + " vs " + std::to_string(p.gamma())));
  }

  for (const auto& d : data_decay(p)) {
    items.push_back({"decay_" + d.name, d.cert.fitted_exponent, static_cast<double>(d.cert.l) - kDecayFitTolerance,
                     d.cert.holds, "fitted decay exponent, l = 2"});
  }
  return items;
}

std::vector<CheckItem> kernel_checks(const RunConfig& cfg) {
  std::vector<CheckItem> items;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const KernelSpec spec{0.1, 0.0, 1.0};
  double anti = 0.0;
  for (std::size_t k = 0; k < cfg.kernel.antisymmetry_points; ++k) {
    const Point3 y{u(rng), u(rng), u(rng)};
    for (Axis i = 0; i < 3; ++i) {
      const double g = gaussian_grad(spec, y, i);
      if (g == 0.0) continue;
      anti = std::max(anti, std::abs(g + gaussian_grad(spec, reflect(y, i), i)) / std::abs(g));
    }
  }
  items.push_back({"antisymmetry", anti, cfg.kernel.antisymmetry_tol, anti <= cfg.kernel.antisymmetry_tol,
                   "relative |G_i(y) + G_i(y^-)|"});

  for (const auto& [nu, sigma] : cfg.kernel.moment_pairs) {
    const double m = weighted_second_moment(nu, sigma, 0, false);
    std::ostringstream name;
    name << "second_moment_nu" << nu << "_sigma" << sigma;
    items.push_back(below(name.str(), std::abs(m - 2.0), cfg.kernel.moment_tol, "full-space weighted moment vs 2"));
  }

  std::vector<double> m2;
  for (double nu : {1e-1, 1e-2, 1e-3}) {
    m2.push_back(second_moment(KernelSpec{nu, 0.0, cfg.kernel.moment_horizon}, cfg.kernel.moment_horizon).measured_M2);
  }
  const double spread = *std::max_element(m2.begin(), m2.end()) - *std::min_element(m2.begin(), m2.end());
  items.push_back(below("M2_viscosity_independent", spread, 1e-6, "spread over nu in {1e-1,1e-2,1e-3}"));
  items.push_back(below("M2_closed_form", std::abs(m2.front() - cfg.kernel.moment_horizon / 4.0), 1e-6,
                        "measured vs T/4"));

  const auto probes = probe_lattice(1.0, 3);
  const auto scan = degeneracy_scan([](const Point3& x) { return x.x1 > 0 ? 1.0 : 0.0; }, cfg.kernel.degeneracy_t, 0,
                                    cfg.kernel.degeneracy_nus, probes);
  bool decreasing = true;
  double worst = 0.0;
  for (std::size_t k = 1; k < scan.size(); ++k) {
    decreasing = decreasing && scan[k] < scan[k - 1];
    worst = std::max(worst, scan[k] / scan[k - 1]);
  }
  std::ostringstream det;
  det << "sup |step * G_nu,1| along nus:";
  for (double s : scan) det << ' ' << s;
  items.push_back({"degeneracy_step", worst, 1.0, decreasing, det.str()});

  const double nk = newton_kernel_grad({1.0, 0.0, 0.0}, 0);
  items.push_back(below("newton_kernel_grad", std::abs(nk - 1.0 / (4.0 * std::numbers::pi)), 1e-15, "value at e1"));
  return items;
}

int cmd_data_check(const RunConfig& cfg, std::ostream& log) {
  for (const auto& w : cfg.iteration.params.validate()) log << "warning: " << w << '\n';
  const OutputDir out(cfg.out);
  write_config(out, cfg);
  const auto items = data_checks(cfg);
  out.write_text("data_check.json", checks_json(items));
  return report_checks(items, log) == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_kernel_check(const RunConfig& cfg, std::ostream& log) {
  const OutputDir out(cfg.out);
  write_config(out, cfg);
  const auto items = kernel_checks(cfg);
  out.write_text("kernel_check.json", checks_json(items));
  return report_checks(items, log) == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_iterate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const OutputDir out(cfg.out);
  write_config(out, cfg);
  IterationConfig it = cfg.iteration;

  ordered_json summary;
  if (cfg.contraction_search) {
    const ContractionResult cr = run_contraction(it);
    ordered_json trials = ordered_json::array();
    for (const auto& t : cr.trials) {
      trials.push_back({{"T", t.T},
                        {"contracting", t.contracting},
                        {"max_ratio", num(t.max_ratio)},
                        {"richardson_rel", num(t.richardson_rel)},
                        {"note", t.note}});
      log << "trial T=" << t.T << " max_ratio=" << t.max_ratio << (t.contracting ? " contracting" : " rejected")
          << (t.note.empty() ? "" : " (" + t.note + ")") << '\n';
    }
    summary["T_measured"] = cr.T_measured;
    summary["trivially_contracting"] = cr.trivially_contracting;
    summary["trials"] = trials;
    it.T = cr.T_measured;
  }

  IterationState st = init_step0(it);
  auto dump = [&](const IterationState& s) {
    const std::size_t first = cfg.checkpoint_all_nodes ? 0 : s.nodes() - 1;
    for (std::size_t n = first; n < s.nodes(); ++n) {
      out.write_field("v_k" + std::to_string(s.k) + "_n" + std::to_string(n) + ".fld", s.v.fields[n]);
    }
  };
  dump(st);
  for (int k = 0; k < it.kmax; ++k) {
    st = step(std::move(st), it);
    dump(st);
    log << "k=" << st.k << " sup_incr=" << st.norm_history.back().sup_incr << '\n';
  }
  std::string history;
  for (const auto& r : st.norm_history) history += norm_record_jsonl(r) + "\n";
  out.write_text("history.jsonl", history);
  out.write_text("contraction.csv", contraction_csv(st.norm_history));

  double max_ratio = 0.0;
  bool ok = true;
  for (const auto& r : st.norm_history) {
    if (r.contraction_ratio) {
      max_ratio = std::max(max_ratio, *r.contraction_ratio);
      ok = ok && *r.contraction_ratio <= 0.5;
    }
  }
  summary["T"] = it.T;
  summary["kmax"] = it.kmax;
  summary["max_ratio"] = num(max_ratio);
  summary["contracting"] = ok;
  summary["richardson_rel"] = num(st.norm_history.back().richardson_rel);
  out.write_text("summary.json", summary.dump(2) + "\n");
  log << "T=" << it.T << " max_ratio=" << max_ratio << (ok ? " (contracting)" : " (ratio above 1/2)") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_limit(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const OutputDir out(cfg.out);
  write_config(out, cfg);
  const IterationConfig& it = cfg.iteration;
  const Params& p = it.params;
  DiagnosticsReport rep;

  log << "viscosity limit drive over " << cfg.nus.size() << " pairs at T=" << it.T << '\n';
  LimitResult lim = viscosity_limit_drive(it, cfg.nus, cfg.epss);
  rep.T = lim.T;
  rep.limit_table = lim.rows;
  rep.cauchy = lim.cauchy;
  rep.contraction = lim.limit_records;
  out.write_text("limit_table.csv", limit_table_csv(lim.rows));
  out.write_field("limit_T.fld", lim.limit.fields.back());

  IterationConfig last = it;
  last.nu = cfg.nus.back();
  last.eps = cfg.epss.back();

  const VectorField& vT = lim.limit.fields.back();
  for (int i = 0; i < 3; ++i) {
    rep.holder_exponents["v" + std::to_string(i + 1)] = holder_exponent_estimate(vT.c[static_cast<std::size_t>(i)]);
  }

  {
    const IterationState s0 = init_step0(last);
    for (int i = 0; i < 3; ++i) {
      rep.lipschitz_B = std::max(rep.lipschitz_B, lipschitz_estimate(burgers_term(s0, i, TermForm::FirstStep, last), last.holder));
      rep.lipschitz_L = std::max(rep.lipschitz_L, lipschitz_estimate(leray_term(s0, i, TermForm::FirstStep, last), last.holder));
    }
  }
  rep.M2 = second_moment(KernelSpec{last.nu, 0.0, it.T}, it.T).measured_M2;
  rep.decay = data_decay(p);

  const auto radii = cfg.radii.empty() ? default_slab_radii(cfg.scan_grid) : cfg.radii;
  rep.singular_slab_profile = singular_slab_scan(slab_fields(cfg.scan_grid, p), radii, cfg.slab_lines, cfg.seed);
  out.write_text("slab_profile.csv", slab_profile_csv(rep.singular_slab_profile));
  const SlabProfile limit_profile =
      singular_slab_scan(slab_fields(vT), default_slab_radii(vT.grid()), cfg.slab_lines, cfg.seed);
  out.write_text("slab_profile_limit.csv", slab_profile_csv(limit_profile));

  std::vector<double> compact;
  bool certified = true;
  std::ostringstream compact_csv;
  compact_csv.precision(17);
  compact_csv << "nu,eps,compactified_sup\n";
  for (std::size_t m = 0; m < lim.increments_at_T.size(); ++m) {
    double c = std::numeric_limits<double>::infinity();
    try {
      c = compactify_check(lim.increments_at_T[m], 1);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CertificateMissing) throw;
      certified = false;
      log << "compactify: " << e.what() << '\n';
    }
    compact.push_back(c);
    compact_csv << cfg.nus[m] << ',' << cfg.epss[m] << ',' << c << '\n';
  }
  out.write_text("compactified.csv", compact_csv.str());
  rep.compactified_sup = *std::max_element(compact.begin(), compact.end());

  const int coarsest = *std::min_element(cfg.residual_grids.begin(), cfg.residual_grids.end());
  const double collar = cfg.residual_collar_cells * 2.0 * it.grid.half_width / coarsest;
  const auto probes = residual_probes(cfg.residual_probe_half, cfg.residual_probes_per_axis, collar);
  for (int n : cfg.residual_grids) {
    VectorSlab slab;
    if (n == it.grid.n) {
      slab = lim.limit;
    } else {
      IterationConfig g = last;
      g.grid.n = n;
      slab = iterate(g).v;
    }
    const double r = reversed_euler_residual(slab, probes);
    rep.residual_trend.push_back({n, r});
    log << "residual n=" << n << " " << r << '\n';
  }
  out.write_text("residual.csv", residual_csv(rep.residual_trend));
  out.write_text("contraction.csv", contraction_csv(rep.contraction));
  out.write_text("report.json", report_json(rep));

  std::vector<CheckItem> items;
  for (const auto& row : lim.rows) {
    std::ostringstream name;
    name << "contracting_nu" << row.nu;
    items.push_back({name.str(), row.max_ratio, 0.5, row.contracting, "max contraction ratio"});
  }
  if (lim.cauchy) {
    items.push_back({"cauchy", lim.rows.back().diff_to_previous.value_or(0.0), 0.0, *lim.cauchy,
                     "successive increment differences strictly decreasing"});
  }
  bool res_dec = true;
  for (std::size_t k = 1; k < rep.residual_trend.size(); ++k) {
    res_dec = res_dec && rep.residual_trend[k].residual < rep.residual_trend[k - 1].residual;
  }
  items.push_back({"residual_trend", rep.residual_trend.back().residual, rep.residual_trend.front().residual, res_dec,
                   "residual decreasing under refinement"});
  const auto& sp = rep.singular_slab_profile;
  for (const auto& [name, t] : {std::pair{"omega1", sp.omega1}, std::pair{"grad_v2", sp.grad_v2},
                                std::pair{"grad_v3", sp.grad_v3}}) {
    items.push_back({std::string("slab_growing_") + name, t.slope, kGrowthSlope,
                     t.trend == Trend::Growing && t.uniform, "log-log slope of the shell sup; uniform across lines"});
  }
  items.push_back({"slab_bounded_v1", sp.v1.slope, kGrowthSlope, sp.v1.trend == Trend::Bounded,
                   "log-log slope of sup |v1|"});
  const double cmax = *std::max_element(compact.begin(), compact.end());
  const double cmin = *std::min_element(compact.begin(), compact.end());
  const double cspread = cmax > 0.0 ? (cmax - cmin) / cmax : 0.0;
  items.push_back({"compactified_uniform", cspread, 0.1, certified && std::isfinite(cmax) && cspread <= 0.1,
                   "relative spread of the compactified sup over the schedule"});
  out.write_text("limit_checks.json", checks_json(items));
  const int failures = report_checks(items, log);
  if (lim.cauchy && !*lim.cauchy) return kExitNotCauchy;
  return failures == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_report(const RunConfig& cfg, std::ostream& log) {
  const OutputDir out(cfg.out);
  bool any = false;
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  if (std::filesystem::exists(out.path("report.json"))) {
    const DiagnosticsReport rep = parse_report_json(slurp(out.path("report.json")));
    out.write_text("report.json", report_json(rep));
    out.write_text("contraction.csv", contraction_csv(rep.contraction));
    out.write_text("slab_profile.csv", slab_profile_csv(rep.singular_slab_profile));
    out.write_text("limit_table.csv", limit_table_csv(rep.limit_table));
    out.write_text("residual.csv", residual_csv(rep.residual_trend));
    log << "re-rendered report.json and its CSVs\n";
    any = true;
  }
  if (std::filesystem::exists(out.path("history.jsonl"))) {
    std::istringstream in(slurp(out.path("history.jsonl")));
    std::vector<NormRecord> recs;
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) recs.push_back(parse_norm_record_jsonl(line));
    }
    out.write_text("history.csv", contraction_csv(recs));
    log << "re-rendered history.csv from " << recs.size() << " records\n";
    any = true;
  }
  if (!any) {
    log << "nothing to render in " << out.root().string() << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

}  // namespace reveuler::cli
