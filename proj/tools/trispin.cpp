// trispin: run one experiment and write its manifest and data files.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "trispin/config.hpp"
#include "trispin/error.hpp"

namespace {

struct Flags {
  std::string config;
  int N = 0;
  bool periodic = false;
  bool open = false;
  double bx = 0.0;
  std::string bx_grid;
  std::vector<double> tau;
  double boundary_field = 0.0;
  std::string grid;
  double u_uu = 0.0, u_dd = 0.0, u_ud = 0.0;
  int n_max = 0;
  std::vector<int> duality_sizes;
  std::string hamiltonian;
  bool dump = false;
  bool bits = false;
  double tol = 0.0;
  int max_iter = 0;
  std::uint64_t seed = 0;
  int k = 0;
  int block_size = 0;
  int threads = 0;
  std::string out_dir;
};

struct Registered {
  CLI::App* app;
  std::vector<std::pair<std::string, CLI::Option*>> opts;
};

Registered add_options(CLI::App* sub, Flags& f) {
  Registered r{sub, {}};
  auto keep = [&](const std::string& key, CLI::Option* o) { r.opts.emplace_back(key, o); };
  sub->add_option("--config", f.config, "JSON config file or a previous manifest.json");
  keep("N", sub->add_option("--N", f.N, "number of sites"));
  keep("periodic", sub->add_flag("--periodic", f.periodic, "periodic boundary conditions"));
  keep("open", sub->add_flag("--open", f.open, "open boundary conditions"));
  keep("Bx", sub->add_option("--bx", f.bx, "transverse field"));
  keep("Bx_grid", sub->add_option("--bx-grid", f.bx_grid, "start:stop:step"));
  keep("tau", sub->add_option("--tau", f.tau, "chiral couplings, comma separated")->delimiter(','));
  keep("boundary_field", sub->add_option("--boundary-field", f.boundary_field, "hexagon edge field"));
  keep("grid", sub->add_option("--grid", f.grid, "J/U axis, start:stop:step"));
  keep("U_uu", sub->add_option("--u-uu", f.u_uu));
  keep("U_dd", sub->add_option("--u-dd", f.u_dd));
  keep("U_ud", sub->add_option("--u-ud", f.u_ud));
  keep("n_max", sub->add_option("--n-max", f.n_max, "boson occupation cutoff"));
  keep("duality_sizes",
       sub->add_option("--duality-sizes", f.duality_sizes, "energy trend sizes")->delimiter(','));
  keep("hamiltonian", sub->add_option("--hamiltonian", f.hamiltonian, "operator file for solve"));
  keep("dump_hamiltonian", sub->add_flag("--hamiltonian-dump", f.dump, "write the operators too"));
  keep("bits", sub->add_flag("--bits", f.bits, "entropy CSV in bits"));
  keep("tol", sub->add_option("--tol", f.tol, "residual tolerance"));
  keep("max_iter", sub->add_option("--max-iter", f.max_iter));
  keep("seed", sub->add_option("--seed", f.seed));
  keep("k", sub->add_option("--k", f.k, "eigenpairs"));
  keep("block_size", sub->add_option("--block-size", f.block_size));
  keep("threads", sub->add_option("--threads", f.threads));
  keep("out_dir", sub->add_option("--out-dir", f.out_dir, "output root (default ./runs)"));
  return r;
}

nlohmann::json overrides(const Registered& r, const Flags& f) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, opt] : r.opts) {
    if (opt->count() == 0) continue;
    if (key == "N") j["N"] = f.N;
    else if (key == "periodic") j["periodic"] = true;
    else if (key == "open") j["periodic"] = false;
    else if (key == "Bx") j["Bx"] = f.bx;
    else if (key == "Bx_grid") j["Bx_grid"] = f.bx_grid;
    else if (key == "tau") j["tau"] = f.tau;
    else if (key == "boundary_field") j["boundary_field"] = f.boundary_field;
    else if (key == "grid") j["grid"] = f.grid;
    else if (key == "U_uu") j["U_uu"] = f.u_uu;
    else if (key == "U_dd") j["U_dd"] = f.u_dd;
    else if (key == "U_ud") j["U_ud"] = f.u_ud;
    else if (key == "n_max") j["n_max"] = f.n_max;
    else if (key == "duality_sizes") j["duality_sizes"] = f.duality_sizes;
    else if (key == "hamiltonian") j["hamiltonian"] = f.hamiltonian;
    else if (key == "dump_hamiltonian") j["dump_hamiltonian"] = true;
    else if (key == "bits") j["bits"] = true;
    else if (key == "tol") j["tol"] = f.tol;
    else if (key == "max_iter") j["max_iter"] = f.max_iter;
    else if (key == "seed") j["seed"] = f.seed;
    else if (key == "k") j["k"] = f.k;
    else if (key == "block_size") j["block_size"] = f.block_size;
    else if (key == "threads") j["threads"] = f.threads;
    else if (key == "out_dir") j["out_dir"] = f.out_dir;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trispin: three-spin chains and triangular-lattice experiments"};
  app.set_version_flag("--version", "trispin 0.1.0");
  app.require_subcommand(1);

  Flags flags;
  std::vector<Registered> subs;
  for (const auto& name : trispin::kExperiments) {
    subs.push_back(add_options(app.add_subcommand(name, "run the " + name + " experiment"), flags));
  }
  subs.push_back(add_options(
      app.add_subcommand("run", "run the experiment named in --config"), flags));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (const auto& r : subs) {
    if (!r.app->parsed()) continue;
    try {
      if (flags.periodic && flags.open) throw trispin::ConfigError("--periodic and --open conflict");
      nlohmann::json ov = overrides(r, flags);
      const std::string name = r.app->get_name();
      if (name != "run") ov["experiment"] = name;
      const trispin::RunConfig cfg = flags.config.empty()
                                         ? trispin::parse_config(nlohmann::json::object(), ov)
                                         : trispin::parse_config_file(flags.config, ov);
      return trispin::dispatch(cfg, std::cerr);
    } catch (const trispin::Error& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return 2;
    }
  }
  return 2;
}
