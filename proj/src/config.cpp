#include "trispin/config.hpp"

#include <Eigen/Core>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "trispin/effective_coupling.hpp"
#include "trispin/error.hpp"
#include "trispin/experiments.hpp"

namespace trispin {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";
constexpr int kManifestVersion = 1;

enum class Kind { String, Int, Seed, Number, Bool, Numbers, Ints };

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::String: return "string";
    case Kind::Int: return "integer";
    case Kind::Seed: return "non-negative integer";
    case Kind::Number: return "number";
    case Kind::Bool: return "boolean";
    case Kind::Numbers: return "array of numbers";
    case Kind::Ints: return "array of integers";
  }
  return "?";
}

bool matches(Kind k, const json& v) {
  switch (k) {
    case Kind::String: return v.is_string();
    case Kind::Int: return v.is_number_integer();
    case Kind::Seed: return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    case Kind::Number: return v.is_number();
    case Kind::Bool: return v.is_boolean();
    case Kind::Numbers:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); });
    case Kind::Ints:
      return v.is_array() &&
             std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number_integer(); });
  }
  return false;
}

struct Field {
  Kind kind;
  std::function<void(RunConfig&, const json&)> set;
};

const std::map<std::string, Field>& schema() {
  static const std::map<std::string, Field> s = {
      {"experiment", {Kind::String, [](RunConfig& c, const json& v) { c.experiment = v; }}},
      {"N", {Kind::Int, [](RunConfig& c, const json& v) { c.N = v; }}},
      {"periodic", {Kind::Bool, [](RunConfig& c, const json& v) { c.periodic = v.get<bool>(); }}},
      {"Bx", {Kind::Number, [](RunConfig& c, const json& v) { c.Bx = v; }}},
      {"Bx_grid", {Kind::String, [](RunConfig& c, const json& v) { c.Bx_grid = v; }}},
      {"tau", {Kind::Numbers, [](RunConfig& c, const json& v) { c.tau = v.get<std::vector<double>>(); }}},
      {"boundary_field", {Kind::Number, [](RunConfig& c, const json& v) { c.boundary_field = v; }}},
      {"grid", {Kind::String, [](RunConfig& c, const json& v) { c.grid = v; }}},
      {"U_uu", {Kind::Number, [](RunConfig& c, const json& v) { c.U_uu = v; }}},
      {"U_dd", {Kind::Number, [](RunConfig& c, const json& v) { c.U_dd = v; }}},
      {"U_ud", {Kind::Number, [](RunConfig& c, const json& v) { c.U_ud = v; }}},
      {"n_max", {Kind::Int, [](RunConfig& c, const json& v) { c.n_max = v; }}},
      {"duality_sizes",
       {Kind::Ints, [](RunConfig& c, const json& v) { c.duality_sizes = v.get<std::vector<int>>(); }}},
      {"hamiltonian", {Kind::String, [](RunConfig& c, const json& v) { c.hamiltonian = v; }}},
      {"tol", {Kind::Number, [](RunConfig& c, const json& v) { c.tol = v; }}},
      {"max_iter", {Kind::Int, [](RunConfig& c, const json& v) { c.max_iter = v; }}},
      {"k", {Kind::Int, [](RunConfig& c, const json& v) { c.k = v; }}},
      {"seed", {Kind::Seed, [](RunConfig& c, const json& v) { c.seed = v.get<std::uint64_t>(); }}},
      {"block_size", {Kind::Int, [](RunConfig& c, const json& v) { c.block_size = v; }}},
      {"threads", {Kind::Int, [](RunConfig& c, const json& v) { c.threads = v; }}},
      {"out_dir", {Kind::String, [](RunConfig& c, const json& v) { c.out_dir = v; }}},
      {"bits", {Kind::Bool, [](RunConfig& c, const json& v) { c.bits = v; }}},
      {"dump_hamiltonian", {Kind::Bool, [](RunConfig& c, const json& v) { c.dump_hamiltonian = v; }}},
  };
  return s;
}

void apply_doc(RunConfig& cfg, const json& doc, const std::string& origin) {
  if (doc.is_null()) return;
  if (!doc.is_object()) throw ConfigError(origin + " must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    const auto it = schema().find(key);
    if (it == schema().end()) throw ConfigError("unknown key \"" + key + "\" in " + origin);
    if (!matches(it->second.kind, value)) {
      throw ConfigError("key \"" + key + "\" expects " + kind_name(it->second.kind) + ", got " +
                        value.type_name());
    }
    it->second.set(cfg, value);
  }
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("key \"" + key + "\": " + what);
}

void validate(const RunConfig& c) {
  require(!c.experiment.empty(), "experiment", "missing");
  require(std::find(kExperiments.begin(), kExperiments.end(), c.experiment) != kExperiments.end(),
          "experiment", "unknown experiment \"" + c.experiment + "\"");
  require(c.tol > 0.0, "tol", "must be positive");
  require(c.max_iter >= 1, "max_iter", "must be at least 1");
  require(c.k >= 1, "k", "must be at least 1");
  require(c.block_size >= 0, "block_size", "must be non-negative");
  require(c.threads >= 0, "threads", "must be non-negative");
  require(!c.out_dir.empty(), "out_dir", "must not be empty");

  const int n = c.sites();
  if (c.experiment == "degeneracy") {
    require(n >= 5 && n <= kMaxSolverSites, "N", "degeneracy needs 5 <= N <= 24");
    require(!c.is_periodic() || n % 3 == 0, "N", "a periodic chain needs N divisible by 3");
  } else if (c.experiment == "criticality") {
    require(n >= 6 && n <= kMaxScanSites, "N", "criticality needs 6 <= N <= 19");
    parse_range("Bx_grid", c.Bx_grid);
  } else if (c.experiment == "duality") {
    require(n >= 9 && n <= kMaxSolverSites, "N", "duality needs 9 <= N <= 24");
    require(c.Bx > 0.0, "Bx", "duality needs Bx > 0");
    for (int s : c.duality_sizes) {
      require(s >= 3 && s <= kMaxSolverSites, "duality_sizes", "sizes must lie in [3, 24]");
    }
  } else if (c.experiment == "hexagon") {
    require(!c.tau.empty(), "tau", "must not be empty");
    for (double t : c.tau) require(t >= -5.0 && t <= 5.0, "tau", "values must lie in [-5, 5]");
  } else if (c.experiment == "couplings") {
    parse_range("grid", c.grid);
    require(c.U_uu > 0.0, "U_uu", "must be positive");
    require(c.U_dd > 0.0, "U_dd", "must be positive");
    require(c.U_ud > 0.0, "U_ud", "must be positive");
    require(c.n_max >= 2, "n_max", "must be at least 2");
  } else if (c.experiment == "solve") {
    require(!c.hamiltonian.empty(), "hamiltonian", "solve needs an operator file");
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TRISPIN_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw ConfigError("TRISPIN_THREADS must be a positive integer");
  }
  return omp_get_num_procs();
}

void dump(const fs::path& p, const OperatorSum& h) {
  std::ofstream os(p);
  if (!os) throw Error("cannot write " + p.string());
  h.write_text(os);
}

std::string tag(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

json run_experiment(const RunConfig& cfg, const fs::path& dir, std::ostream& log) {
  const SolverOptions opts = cfg.solver();
  const int n = cfg.sites();
  if (cfg.experiment == "degeneracy") {
    const auto r = run_degeneracy_check(n, cfg.is_periodic(), cfg.Bx, opts);
    write_data(dir, r);
    if (cfg.dump_hamiltonian) dump(dir / "hamiltonian.txt", r.hamiltonian);
    log << "ground degeneracy " << r.ground_degeneracy << ", gap " << r.gap << '\n';
    return to_json(r);
  }
  if (cfg.experiment == "criticality") {
    const auto grid = parse_range("Bx_grid", cfg.Bx_grid);
    CriticalityScan scan;
    scan.n_sites = n;
    scan.periodic = cfg.is_periodic();
    for (double bx : grid) {
      auto one = run_criticality_scan(n, {bx}, cfg.is_periodic(), opts);
      const auto& p = one.points.front();
      log << "Bx " << bx << ": c_eff " << p.fit.c_eff << " +- " << p.fit.c_err << ", saturation "
          << p.saturation << (p.degenerate ? " (degenerate)" : "") << '\n';
      if (cfg.dump_hamiltonian) {
        dump(dir / ("hamiltonian_Bx" + tag(bx) + ".txt"),
             build_zzz_field_chain(chain(n, cfg.is_periodic()), bx, 0.0));
      }
      scan.points.push_back(std::move(one.points.front()));
    }
    write_data(dir, scan, cfg.bits);
    return to_json(scan);
  }
  if (cfg.experiment == "duality") {
    const auto r = run_duality_report(n, cfg.Bx, cfg.duality_sizes, opts);
    write_data(dir, r);
    if (cfg.dump_hamiltonian) dump(dir / "hamiltonian.txt", build_zzz_field_chain(chain(n, false), cfg.Bx, 0.0));
    log << "bulk terms mapped " << r.bulk_mapped << "/" << r.bulk_terms << ", boundary "
        << r.boundary.size() << '\n';
    return to_json(r);
  }
  if (cfg.experiment == "hexagon") {
    ChiralitySweep sweep;
    sweep.boundary_field = cfg.boundary_field;
    for (double t : cfg.tau) {
      auto one = run_hexagon_sweep({t}, cfg.boundary_field, opts);
      const auto& p = one.points.front();
      log << "tau " << t << ": max |chi| " << p.max_abs << " (" << to_string(p.max_class)
          << "), center/outer " << p.center_mean_abs << "/" << p.outer_mean_abs << '\n';
      if (cfg.dump_hamiltonian) {
        dump(dir / ("hamiltonian_tau" + tag(t) + ".txt"),
             build_chiral_heisenberg_model(hexagon19(), t, cfg.boundary_field));
      }
      sweep.points.push_back(std::move(one.points.front()));
    }
    write_data(dir, sweep);
    return to_json(sweep);
  }
  if (cfg.experiment == "couplings") {
    const auto axis = parse_range("grid", cfg.grid);
    BoseHubbardSpec tmpl;
    tmpl.U_uu = cfg.U_uu;
    tmpl.U_dd = cfg.U_dd;
    tmpl.U_ud = cfg.U_ud;
    tmpl.n_max = cfg.n_max;
    tmpl.J_up = axis.back() * cfg.U_ud;
    tmpl.J_dn = axis.back() * cfg.U_ud;
    if (tmpl.beyond_comfort_zone()) {
      log << "warning: |J|/U reaches " << tmpl.perturbative_ratio()
          << ", beyond the comfortable perturbative range (0.2)\n";
    }
    const auto surface = coupling_surface(axis, axis, tmpl);
    std::ofstream os(dir / "data_surface.csv");
    write_csv(os, surface);
    int failed = 0;
    double max_l1 = 0.0, max_l3 = 0.0, max_res = 0.0, min_l3 = 0.0, max_l3_signed = 0.0;
    json failures = json::array();
    for (const auto& p : surface) {
      if (!p.ok) {
        ++failed;
        failures.push_back({{"Jup_over_U", p.jup_over_u}, {"Jdn_over_U", p.jdn_over_u}, {"error", p.error}});
        continue;
      }
      max_l1 = std::max(max_l1, std::abs(p.couplings.lambda1));
      max_l3 = std::max(max_l3, std::abs(p.couplings.lambda3));
      min_l3 = std::min(min_l3, p.couplings.lambda3);
      max_l3_signed = std::max(max_l3_signed, p.couplings.lambda3);
      max_res = std::max(max_res, p.couplings.residual);
    }
    log << surface.size() << " grid points, " << failed << " failed\n";
    return {{"points", surface.size()},
            {"failed", failed},
            {"failures", failures},
            {"max_abs_lambda1", max_l1},
            {"max_abs_lambda3", max_l3},
            {"lambda3_changes_sign", min_l3 < 0.0 && max_l3_signed > 0.0},
            {"max_residual", max_res}};
  }
  // solve
  std::ifstream is(cfg.hamiltonian);
  if (!is) throw ConfigError("key \"hamiltonian\": cannot open " + cfg.hamiltonian);
  OperatorSum h(1);
  try {
    h = OperatorSum::read_text(is);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("key \"hamiltonian\": ") + e.what());
  }
  const SpectrumResult s = ground_states(h, opts);
  std::ofstream os(dir / "data_spectrum.csv");
  os.precision(17);
  os << "level,energy,residual\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    os << i << ',' << s.eigenvalues[i] << ',' << s.residual_norms[i] << '\n';
  }
  log << "ground energy " << s.eigenvalues.front() << ", degeneracy " << s.ground_degeneracy << '\n';
  return {{"n_sites", h.n_sites()},
          {"terms", h.size()},
          {"eigenvalues", s.eigenvalues},
          {"residuals", s.residual_norms},
          {"ground_degeneracy", s.ground_degeneracy},
          {"degeneracy_tol", s.degeneracy_tol},
          {"iterations", s.iterations},
          {"real_arithmetic", s.real_arithmetic}};
}

}  // namespace

int RunConfig::sites() const {
  if (N > 0) return N;
  if (experiment == "degeneracy") return 9;
  if (experiment == "criticality") return 19;
  if (experiment == "duality") return 12;
  if (experiment == "hexagon") return 19;
  return 0;
}

bool RunConfig::is_periodic() const {
  if (periodic) return *periodic;
  return experiment == "degeneracy";
}

SolverOptions RunConfig::solver() const {
  SolverOptions o;
  o.k = k;
  o.tol = tol;
  o.max_iter = max_iter;
  o.seed = seed;
  o.block_size = block_size;
  return o;
}

std::vector<double> parse_range(const std::string& key, const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("key \"" + key + "\" expects start:stop:step, got \"" + text + "\"");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw ConfigError("key \"" + key + "\" expects start:stop:step with step > 0, got \"" + text + "\"");
  }
  return linear_grid(parts[0], parts[1], parts[2]);
}

RunConfig parse_config(const json& file_doc, const json& overrides) {
  RunConfig cfg;
  const bool manifest = file_doc.is_object() && file_doc.contains("manifest_version");
  apply_doc(cfg, manifest ? file_doc.at("config") : file_doc, "config");
  apply_doc(cfg, overrides, "command-line overrides");
  validate(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::string& path, const json& overrides) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc, overrides);
}

json to_json(const RunConfig& c) {
  json j = {{"experiment", c.experiment},
            {"N", c.sites()},
            {"periodic", c.is_periodic()},
            {"Bx", c.Bx},
            {"Bx_grid", c.Bx_grid},
            {"tau", c.tau},
            {"boundary_field", c.boundary_field},
            {"grid", c.grid},
            {"U_uu", c.U_uu},
            {"U_dd", c.U_dd},
            {"U_ud", c.U_ud},
            {"n_max", c.n_max},
            {"duality_sizes", c.duality_sizes},
            {"hamiltonian", c.hamiltonian},
            {"tol", c.tol},
            {"max_iter", c.max_iter},
            {"k", c.k},
            {"seed", c.seed},
            {"block_size", c.block_size},
            {"threads", c.threads},
            {"out_dir", c.out_dir},
            {"bits", c.bits},
            {"dump_hamiltonian", c.dump_hamiltonian}};
  return j;
}

int dispatch(const RunConfig& cfg, std::ostream& log) {
  try {
    const int threads = resolve_threads(cfg.threads);
    omp_set_num_threads(threads);
    const auto t0 = std::chrono::steady_clock::now();
    const std::string started = utc_now();
    const fs::path dir = make_run_directory(cfg.out_dir, cfg.experiment);
    log << "writing to " << dir.string() << '\n';

    const json results = run_experiment(cfg, dir, log);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json config = to_json(cfg);
    config["threads"] = threads;
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path().filename().string());
    std::sort(files.begin(), files.end());
    const json manifest = {
        {"manifest_version", kManifestVersion},
        {"experiment", cfg.experiment},
        {"config", config},
        {"seeds", {{"solver", cfg.seed}}},
        {"versions",
         {{"trispin", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)},
          {"compiler", __VERSION__}}},
        {"timings", {{"started", started}, {"seconds", seconds}, {"threads", threads}}},
        {"files", files},
        {"results", results}};
    std::ofstream os(dir / "manifest.json");
    os << manifest.dump(2) << '\n';
    if (!os) throw Error("cannot write manifest");
    log << "done in " << seconds << " s\n";
    return 0;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    log << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace trispin
