#include "reveuler/cli/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "reveuler/error.hpp"

namespace reveuler::cli {

using nlohmann::ordered_json;

namespace {

void reject_unknown(const ordered_json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::Validation, where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!known.contains(k)) throw Error(ErrorKind::Validation, "unknown key '" + k + "' in " + where);
  }
}

template <class T>
void read(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void RunConfig::validate() const {
  iteration.validate();
  if (nus.empty() || nus.size() != epss.size()) {
    throw Error(ErrorKind::Validation, "nus and epss must be non-empty and of equal length");
  }
  for (std::size_t k = 1; k < nus.size(); ++k) {
    if (!(nus[k] < nus[k - 1]) || !(epss[k] <= epss[k - 1])) throw Error(ErrorKind::Validation, "schedules must descend");
  }
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (!(radii[k] < radii[k - 1])) throw Error(ErrorKind::Validation, "radii must descend");
  }
  scan_grid.validate();
  if (slab_lines < 1) throw Error(ErrorKind::Validation, "slab_lines must be >= 1");
  if (residual_grids.empty()) throw Error(ErrorKind::Validation, "residual_grids must be non-empty");
  for (int n : residual_grids) GridSpec{iteration.grid.half_width, n}.validate();
  if (!(residual_probe_half > 0.0) || residual_probes_per_axis < 2) {
    throw Error(ErrorKind::Validation, "residual probe lattice needs half > 0 and >= 2 points per axis");
  }
  if (out.empty()) throw Error(ErrorKind::Validation, "output directory must be set");
  if (data.divergence_points == 0 || data.gradient_points == 0) {
    throw Error(ErrorKind::Validation, "data check point counts must be positive");
  }
  if (kernel.degeneracy_nus.empty()) throw Error(ErrorKind::Validation, "degeneracy_nus must be non-empty");
}

void RunConfig::propagate_seed() { iteration.holder.seed = seed; }

std::string to_json_text(const RunConfig& c) {
  const IterationConfig& it = c.iteration;
  ordered_json j;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["params"] = {{"alpha0", it.params.alpha0},
                 {"beta0", it.params.beta0},
                 {"family", to_string(it.params.family)},
                 {"h3_variant", to_string(it.params.h3_variant)}};
  j["grid"] = {{"half_width", it.grid.half_width}, {"n", it.grid.n}};
  j["iteration"] = {{"nu", it.nu},
                    {"eps", it.eps},
                    {"horizon", it.T},
                    {"nsteps_time", it.nsteps_time},
                    {"time_grading", it.time_grading},
                    {"kmax", it.kmax},
                    {"norm_kind", to_string(it.norm_kind)},
                    {"leray", to_string(it.leray)},
                    {"last_product", to_string(it.last_product)},
                    {"dealias", it.dealias},
                    {"zero_data", it.zero_data},
                    {"richardson_tol", it.richardson_tol},
                    {"holder_delta", it.holder_delta},
                    {"holder_straddling_pairs", it.holder.straddling},
                    {"holder_random_pairs", it.holder.random},
                    {"contraction_search", c.contraction_search},
                    {"checkpoint_all_nodes", c.checkpoint_all_nodes}};
  j["limit"] = {{"nus", c.nus},
                {"epss", c.epss},
                {"radii", c.radii},
                {"scan_grid", {{"half_width", c.scan_grid.half_width}, {"n", c.scan_grid.n}}},
                {"slab_lines", c.slab_lines},
                {"residual_grids", c.residual_grids},
                {"residual_probe_half", c.residual_probe_half},
                {"residual_probes_per_axis", c.residual_probes_per_axis},
                {"residual_collar_cells", c.residual_collar_cells}};
  j["data_check"] = {{"divergence_points", c.data.divergence_points},
                     {"gradient_points", c.data.gradient_points},
                     {"sample_half_width", c.data.sample_half_width},
                     {"min_abs_x1", c.data.min_abs_x1},
                     {"divergence_tol", c.data.divergence_tol},
                     {"gradient_rel_tol", c.data.gradient_rel_tol}};
  ordered_json pairs = ordered_json::array();
  for (const auto& [nu, sigma] : c.kernel.moment_pairs) pairs.push_back({nu, sigma});
  j["kernel_check"] = {{"antisymmetry_points", c.kernel.antisymmetry_points},
                       {"antisymmetry_tol", c.kernel.antisymmetry_tol},
                       {"moment_pairs", pairs},
                       {"moment_tol", c.kernel.moment_tol},
                       {"moment_horizon", c.kernel.moment_horizon},
                       {"degeneracy_nus", c.kernel.degeneracy_nus},
                       {"degeneracy_t", c.kernel.degeneracy_t}};
  return j.dump(2) + "\n";
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig c;
  try {
    const ordered_json j = text.find_first_not_of(" \t\r\n") == std::string::npos ? ordered_json::object()
                                                                                   : ordered_json::parse(text);
    reject_unknown(j, {"seed", "out", "params", "grid", "iteration", "limit", "data_check", "kernel_check"}, "config");
    read(j, "seed", c.seed);
    read(j, "out", c.out);
    IterationConfig& it = c.iteration;
    if (j.contains("params")) {
      const auto& p = j.at("params");
      reject_unknown(p, {"alpha0", "beta0", "family", "h3_variant"}, "params");
      read(p, "alpha0", it.params.alpha0);
      read(p, "beta0", it.params.beta0);
      if (p.contains("family")) it.params.family = family_from_string(p.at("family").get<std::string>());
      if (p.contains("h3_variant")) it.params.h3_variant = h3_variant_from_string(p.at("h3_variant").get<std::string>());
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      reject_unknown(g, {"half_width", "n"}, "grid");
      read(g, "half_width", it.grid.half_width);
      read(g, "n", it.grid.n);
    }
    if (j.contains("iteration")) {
      const auto& s = j.at("iteration");
      reject_unknown(s,
                     {"nu", "eps", "horizon", "nsteps_time", "time_grading", "kmax", "norm_kind", "leray", "last_product",
                      "dealias", "zero_data", "richardson_tol", "holder_delta", "holder_straddling_pairs",
                      "holder_random_pairs", "contraction_search", "checkpoint_all_nodes"},
                     "iteration");
      read(s, "nu", it.nu);
      read(s, "eps", it.eps);
      read(s, "horizon", it.T);
      read(s, "nsteps_time", it.nsteps_time);
      read(s, "time_grading", it.time_grading);
      read(s, "kmax", it.kmax);
      if (s.contains("norm_kind")) it.norm_kind = norm_kind_from_string(s.at("norm_kind").get<std::string>());
      if (s.contains("leray")) it.leray = leray_convention_from_string(s.at("leray").get<std::string>());
      if (s.contains("last_product")) it.last_product = last_product_from_string(s.at("last_product").get<std::string>());
      read(s, "dealias", it.dealias);
      read(s, "zero_data", it.zero_data);
      read(s, "richardson_tol", it.richardson_tol);
      read(s, "holder_delta", it.holder_delta);
      read(s, "holder_straddling_pairs", it.holder.straddling);
      read(s, "holder_random_pairs", it.holder.random);
      read(s, "contraction_search", c.contraction_search);
      read(s, "checkpoint_all_nodes", c.checkpoint_all_nodes);
    }
    if (j.contains("limit")) {
      const auto& l = j.at("limit");
      reject_unknown(l,
                     {"nus", "epss", "radii", "scan_grid", "slab_lines", "residual_grids", "residual_probe_half",
                      "residual_probes_per_axis", "residual_collar_cells"},
                     "limit");
      read(l, "nus", c.nus);
      read(l, "epss", c.epss);
      read(l, "radii", c.radii);
      if (l.contains("scan_grid")) {
        const auto& g = l.at("scan_grid");
        reject_unknown(g, {"half_width", "n"}, "scan_grid");
        read(g, "half_width", c.scan_grid.half_width);
        read(g, "n", c.scan_grid.n);
      }
      read(l, "slab_lines", c.slab_lines);
      read(l, "residual_grids", c.residual_grids);
      read(l, "residual_probe_half", c.residual_probe_half);
      read(l, "residual_probes_per_axis", c.residual_probes_per_axis);
      read(l, "residual_collar_cells", c.residual_collar_cells);
    }
    if (j.contains("data_check")) {
      const auto& d = j.at("data_check");
      reject_unknown(d,
                     {"divergence_points", "gradient_points", "sample_half_width", "min_abs_x1", "divergence_tol",
                      "gradient_rel_tol"},
                     "data_check");
      read(d, "divergence_points", c.data.divergence_points);
      read(d, "gradient_points", c.data.gradient_points);
      read(d, "sample_half_width", c.data.sample_half_width);
      read(d, "min_abs_x1", c.data.min_abs_x1);
      read(d, "divergence_tol", c.data.divergence_tol);
      read(d, "gradient_rel_tol", c.data.gradient_rel_tol);
    }
    if (j.contains("kernel_check")) {
      const auto& k = j.at("kernel_check");
      reject_unknown(k,
                     {"antisymmetry_points", "antisymmetry_tol", "moment_pairs", "moment_tol", "moment_horizon",
                      "degeneracy_nus", "degeneracy_t"},
                     "kernel_check");
      read(k, "antisymmetry_points", c.kernel.antisymmetry_points);
      read(k, "antisymmetry_tol", c.kernel.antisymmetry_tol);
      if (k.contains("moment_pairs")) {
        c.kernel.moment_pairs.clear();
        for (const auto& p : k.at("moment_pairs")) c.kernel.moment_pairs.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      }
      read(k, "moment_tol", c.kernel.moment_tol);
      read(k, "moment_horizon", c.kernel.moment_horizon);
      read(k, "degeneracy_nus", c.kernel.degeneracy_nus);
      read(k, "degeneracy_t", c.kernel.degeneracy_t);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Validation, std::string("config: ") + e.what());
  }
  c.propagate_seed();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace reveuler::cli
