#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "reveuler/diagnostics.hpp"
#include "reveuler/error.hpp"

namespace reveuler {

namespace {

using nlohmann::ordered_json;

// Non-finite entries are written as the marker string instead of null.
ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return "divergent";
}

ordered_json opt(const std::optional<double>& v) { return v ? num(*v) : ordered_json(nullptr); }

ordered_json to_json(const NormRecord& r) {
  return ordered_json{{"k", r.k},
                      {"sup_incr", num(r.sup_incr)},
                      {"holder_c1delta_incr", num(r.holder_c1delta_incr)},
                      {"grid_h2_incr", num(r.grid_h2_incr)},
                      {"contraction_ratio", opt(r.contraction_ratio)},
                      {"sup_diff", num(r.sup_diff)},
                      {"holder_c1delta_diff", num(r.holder_c1delta_diff)},
                      {"grid_h2_diff", num(r.grid_h2_diff)},
                      {"richardson_rel", num(r.richardson_rel)},
                      {"max_divergence", num(r.max_divergence)}};
}

ordered_json to_json(const SlabQuantityTrend& t) {
  ordered_json lines = ordered_json::array();
  for (double s : t.line_slopes) lines.push_back(num(s));
  return ordered_json{{"slope", num(t.slope)}, {"trend", to_string(t.trend)}, {"uniform", t.uniform},
                      {"line_slopes", lines}};
}

// Shortest round-trip text for CSV cells.
std::string cell(double v) {
  if (!std::isfinite(v)) return "divergent";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(const std::optional<double>& v) { return v ? cell(*v) : std::string(); }

double get(const ordered_json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "divergent") return std::numeric_limits<double>::infinity();
    throw Error(ErrorKind::Io, "unexpected string value in report");
  }
  return j.get<double>();
}

std::optional<double> get_opt(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return get(j);
}

NormRecord record_from(const ordered_json& j) {
  NormRecord r;
  r.k = j.at("k").get<int>();
  r.sup_incr = get(j.at("sup_incr"));
  r.holder_c1delta_incr = get(j.at("holder_c1delta_incr"));
  r.grid_h2_incr = get(j.at("grid_h2_incr"));
  r.contraction_ratio = get_opt(j.at("contraction_ratio"));
  r.sup_diff = get(j.at("sup_diff"));
  r.holder_c1delta_diff = get(j.at("holder_c1delta_diff"));
  r.grid_h2_diff = get(j.at("grid_h2_diff"));
  r.richardson_rel = get(j.at("richardson_rel"));
  r.max_divergence = get(j.at("max_divergence"));
  return r;
}

SlabQuantityTrend trend_from(const ordered_json& j) {
  SlabQuantityTrend t;
  t.slope = get(j.at("slope"));
  t.trend = j.at("trend").get<std::string>() == "growing" ? Trend::Growing : Trend::Bounded;
  t.uniform = j.at("uniform").get<bool>();
  for (const auto& s : j.at("line_slopes")) t.line_slopes.push_back(get(s));
  return t;
}

template <class Fn>
auto guarded_parse(const std::string& text, Fn&& fn) {
  try {
    return fn(ordered_json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed report: ") + e.what());
  }
}

}  // namespace

NormRecord parse_norm_record_jsonl(const std::string& line) {
  return guarded_parse(line, [](const ordered_json& j) { return record_from(j); });
}

DiagnosticsReport parse_report_json(const std::string& text) {
  return guarded_parse(text, [](const ordered_json& j) {
    DiagnosticsReport r;
    for (const auto& [k, v] : j.at("holder_exponents").items()) r.holder_exponents[k] = get(v);
    r.lipschitz_B = get(j.at("lipschitz_B"));
    r.lipschitz_L = get(j.at("lipschitz_L"));
    r.M2 = get(j.at("M2"));
    for (const auto& rec : j.at("contraction")) r.contraction.push_back(record_from(rec));
    const auto& sp = j.at("singular_slab_profile");
    for (const auto& row : sp.at("rows")) {
      r.singular_slab_profile.rows.push_back({get(row.at("r")), get(row.at("sup_omega1")), get(row.at("sup_grad_v2")),
                                              get(row.at("sup_grad_v3")), get(row.at("sup_v1"))});
    }
    for (const auto& l : sp.at("lines")) r.singular_slab_profile.lines.emplace_back(get(l.at(0)), get(l.at(1)));
    r.singular_slab_profile.omega1 = trend_from(sp.at("omega1"));
    r.singular_slab_profile.grad_v2 = trend_from(sp.at("grad_v2"));
    r.singular_slab_profile.grad_v3 = trend_from(sp.at("grad_v3"));
    r.singular_slab_profile.v1 = trend_from(sp.at("v1"));
    r.compactified_sup = get(j.at("compactified_sup"));
    for (const auto& d : j.at("decay")) {
      DecayRecord rec;
      rec.name = d.at("name").get<std::string>();
      rec.cert.l = d.at("l").get<int>();
      rec.cert.m = d.at("m").get<int>();
      rec.cert.fitted_exponent = get(d.at("fitted_exponent"));
      rec.cert.max_ratio_constant = get(d.at("max_ratio_constant"));
      rec.cert.holds = d.at("holds").get<bool>();
      r.decay.push_back(rec);
    }
    for (const auto& p : j.at("residual_trend")) r.residual_trend.push_back({p.at("n").get<int>(), get(p.at("residual"))});
    for (const auto& row : j.at("limit_table")) {
      r.limit_table.push_back({get(row.at("nu")), get(row.at("eps")), row.at("contracting").get<bool>(),
                               get(row.at("max_ratio")), get(row.at("sup_incr")), get_opt(row.at("diff_to_previous"))});
    }
    if (!j.at("cauchy").is_null()) r.cauchy = j.at("cauchy").get<bool>();
    r.T = get(j.at("T"));
    return r;
  });
}

std::string norm_record_jsonl(const NormRecord& r) { return to_json(r).dump(); }

std::string report_json(const DiagnosticsReport& r) {
  ordered_json j;
  ordered_json holder = ordered_json::object();
  for (const auto& [k, v] : r.holder_exponents) holder[k] = num(v);
  j["holder_exponents"] = holder;
  j["lipschitz_B"] = num(r.lipschitz_B);
  j["lipschitz_L"] = num(r.lipschitz_L);
  j["M2"] = num(r.M2);
  ordered_json contraction = ordered_json::array();
  for (const auto& rec : r.contraction) contraction.push_back(to_json(rec));
  j["contraction"] = contraction;
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.singular_slab_profile.rows) {
    rows.push_back({{"r", num(row.r)},
                    {"sup_omega1", num(row.sup_omega1)},
                    {"sup_grad_v2", num(row.sup_grad_v2)},
                    {"sup_grad_v3", num(row.sup_grad_v3)},
                    {"sup_v1", num(row.sup_v1)}});
  }
  ordered_json lines = ordered_json::array();
  for (const auto& [a, b] : r.singular_slab_profile.lines) lines.push_back({num(a), num(b)});
  j["singular_slab_profile"] = {{"rows", rows},
                                {"lines", lines},
                                {"omega1", to_json(r.singular_slab_profile.omega1)},
                                {"grad_v2", to_json(r.singular_slab_profile.grad_v2)},
                                {"grad_v3", to_json(r.singular_slab_profile.grad_v3)},
                                {"v1", to_json(r.singular_slab_profile.v1)}};
  j["compactified_sup"] = num(r.compactified_sup);
  ordered_json decay = ordered_json::array();
  for (const auto& d : r.decay) {
    decay.push_back({{"name", d.name},
                     {"l", d.cert.l},
                     {"m", d.cert.m},
                     {"fitted_exponent", num(d.cert.fitted_exponent)},
                     {"max_ratio_constant", num(d.cert.max_ratio_constant)},
                     {"holds", d.cert.holds}});
  }
  j["decay"] = decay;
  ordered_json residual = ordered_json::array();
  for (const auto& p : r.residual_trend) residual.push_back({{"n", p.n}, {"residual", num(p.residual)}});
  j["residual_trend"] = residual;
  ordered_json limit = ordered_json::array();
  for (const auto& row : r.limit_table) {
    limit.push_back({{"nu", num(row.nu)},
                     {"eps", num(row.eps)},
                     {"contracting", row.contracting},
                     {"max_ratio", num(row.max_ratio)},
                     {"sup_incr", num(row.sup_incr)},
                     {"diff_to_previous", opt(row.diff_to_previous)}});
  }
  j["limit_table"] = limit;
  j["cauchy"] = r.cauchy ? ordered_json(*r.cauchy) : ordered_json(nullptr);
  j["T"] = num(r.T);
  return j.dump(2) + "\n";
}

std::string contraction_csv(const std::vector<NormRecord>& records) {
  std::ostringstream os;
  os << "k,sup_incr,holder_c1delta_incr,grid_h2_incr,sup_diff,holder_c1delta_diff,grid_h2_diff,contraction_ratio,"
        "richardson_rel,max_divergence\n";
  for (const auto& r : records) {
    os << r.k << ',' << cell(r.sup_incr) << ',' << cell(r.holder_c1delta_incr) << ',' << cell(r.grid_h2_incr) << ','
       << cell(r.sup_diff) << ',' << cell(r.holder_c1delta_diff) << ',' << cell(r.grid_h2_diff) << ','
       << cell(r.contraction_ratio) << ',' << cell(r.richardson_rel) << ',' << cell(r.max_divergence) << '\n';
  }
  return os.str();
}

std::string slab_profile_csv(const SlabProfile& p) {
  std::ostringstream os;
  os << "r,sup_omega1,sup_grad_v2,sup_grad_v3,sup_v1\n";
  for (const auto& row : p.rows) {
    os << cell(row.r) << ',' << cell(row.sup_omega1) << ',' << cell(row.sup_grad_v2) << ','
       << cell(row.sup_grad_v3) << ',' << cell(row.sup_v1) << '\n';
  }
  return os.str();
}

std::string limit_table_csv(const std::vector<LimitRow>& rows) {
  std::ostringstream os;
  os << "nu,eps,contracting,max_ratio,sup_incr,diff_to_previous\n";
  for (const auto& r : rows) {
    os << cell(r.nu) << ',' << cell(r.eps) << ',' << (r.contracting ? 1 : 0) << ',' << cell(r.max_ratio) << ','
       << cell(r.sup_incr) << ',' << cell(r.diff_to_previous) << '\n';
  }
  return os.str();
}

std::string residual_csv(const std::vector<ResidualPoint>& rows) {
  std::ostringstream os;
  os << "n,residual\n";
  for (const auto& r : rows) os << r.n << ',' << cell(r.residual) << '\n';
  return os.str();
}

}  // namespace reveuler
