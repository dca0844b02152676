#include <exception>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "reveuler/cli/commands.hpp"
#include "reveuler/error.hpp"
#include "reveuler/parallel.hpp"

using namespace reveuler;
using namespace reveuler::cli;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_n;
  std::optional<double> nu;
  std::optional<double> eps;
  std::optional<double> horizon;
  std::optional<int> kmax;
  std::optional<std::string> family;
  std::optional<std::string> last_product;
  bool zero_data = false;
  bool print_config = false;
};

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (o.out) c.out = *o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.grid_n) c.iteration.grid.n = *o.grid_n;
  if (o.nu) c.iteration.nu = *o.nu;
  if (o.eps) c.iteration.eps = *o.eps;
  if (o.horizon) c.iteration.T = *o.horizon;
  if (o.kmax) c.iteration.kmax = *o.kmax;
  if (o.family) c.iteration.params.family = family_from_string(*o.family);
  if (o.last_product) c.iteration.last_product = last_product_from_string(*o.last_product);
  if (o.zero_data) c.iteration.zero_data = true;
  c.propagate_seed();
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rev_euler: singular data, viscous fixed-point scheme and diagnostics"};
  app.require_subcommand(0, 1);
  Overrides o;
  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory");
  app.add_option("--seed", o.seed, "seed for every sampled pair and probe set");
  app.add_option("--grid-n", o.grid_n, "grid points per axis");
  app.add_option("--nu", o.nu, "viscosity");
  app.add_option("--eps", o.eps, "mollifier width");
  app.add_option("--horizon", o.horizon, "time horizon T");
  app.add_option("--kmax", o.kmax, "number of fixed-point updates");
  app.add_option("--family", o.family, "data family")->check(CLI::IsMember({"planar", "radial"}));
  app.add_option("--last-product,--compat-eq19", o.last_product, "last product of the first-step Leray source")
      ->check(CLI::IsMember({"v2", "v3"}));
  app.add_flag("--zero-data", o.zero_data, "replace the data by zero");
  app.add_flag("--print-config", o.print_config, "print the resolved configuration and exit");

  std::function<int(const RunConfig&, std::ostream&)> action;
  app.add_subcommand("data-check", "closed-form data battery")->callback([&] { action = cmd_data_check; });
  app.add_subcommand("kernel-check", "kernel facts battery")->callback([&] { action = cmd_kernel_check; });
  app.add_subcommand("iterate", "horizon search, checkpoints and norm history")->callback([&] { action = cmd_iterate; });
  app.add_subcommand("limit", "viscosity limit, residual, slab scan and report")->callback([&] { action = cmd_limit; });
  app.add_subcommand("report", "re-render CSV/JSON from an output directory")->callback([&] { action = cmd_report; });
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitCheckFailed;
  }

  try {
    const RunConfig cfg = resolve(o);
    if (o.print_config) {
      std::cout << to_json_text(cfg);
      return kExitOk;
    }
    if (!action) {
      std::cerr << "rev_euler: a subcommand is required (see --help)\n";
      return kExitCheckFailed;
    }
    configure_parallelism();
    return action(cfg, std::cout);
  } catch (const Error& e) {
    std::cerr << "rev_euler: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "rev_euler: " << e.what() << '\n';
    return kExitRuntimeFault;
  }
}
