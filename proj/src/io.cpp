#include "masslab/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace masslab {

namespace {

using ojson = nlohmann::ordered_json;

ojson number_or_null(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

ojson array_of(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(std::string_view canonical) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

std::string canonical(const SolverConfig& cfg) {
  std::string s;
  s += "solver.backtracking=" + format_double(cfg.backtracking) + "\n";
  s += "solver.divergence_floor=" + format_double(cfg.divergence_floor) + "\n";
  s += "solver.energy_tol=" + format_double(cfg.energy_tol) + "\n";
  s += "solver.grad_tol=" + format_double(cfg.grad_tol) + "\n";
  s += "solver.max_iter=" + std::to_string(cfg.max_iter) + "\n";
  s += "solver.seed=" + std::to_string(cfg.seed) + "\n";
  s += "solver.stall_window=" + std::to_string(cfg.stall_window) + "\n";
  s += "solver.step=" + format_double(cfg.step) + "\n";
  return s;
}

std::string canonical(const Model& model) {
  std::string s;
  s += "model.dim=" + std::to_string(model.dim) + "\n";
  s += std::string("model.kind=") + to_string(model.kind) + "\n";
  s += "model.mu=" + format_double(model.mu) + "\n";
  s += "model.potential=" + (model.potential ? model.potential->describe() : std::string("none")) + "\n";
  return s;
}

std::string canonical(const GroundStateConfig& cfg, int dim) {
  const std::size_t points = cfg.points ? cfg.points : default_points(dim);
  const double r_max = cfg.r_max > 0.0 ? cfg.r_max : default_r_max(dim);
  std::string s;
  s += "grid.dim=" + std::to_string(dim) + "\n";
  s += "grid.points=" + std::to_string(points) + "\n";
  s += "grid.r_max=" + format_double(r_max) + "\n";
  s += "groundstate.bracket_hi=" + format_double(cfg.bracket_hi) + "\n";
  s += "groundstate.bracket_lo=" + format_double(cfg.bracket_lo) + "\n";
  s += "groundstate.identity_tol=" + format_double(cfg.identity_tol) + "\n";
  s += "groundstate.newton_steps=" + std::to_string(cfg.newton_steps) + "\n";
  s += "groundstate.ode_step=" + format_double(cfg.ode_step) + "\n";
  return s;
}

std::string scan_to_json(const ScanResult& scan, std::string_view hash) {
  ojson j;
  j["schema"] = "masslab.scan";
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = std::string(hash);
  j["model"] = {{"kind", to_string(scan.model.kind)},
                {"dim", scan.model.dim},
                {"mu", scan.model.mu},
                {"potential", scan.model.potential ? scan.model.potential->describe() : std::string("none")}};
  j["grid"] = scan.grid_description;
  j["cstar"] = scan.cstar;
  j["solver"] = {{"step", scan.config.step},
                 {"max_iter", scan.config.max_iter},
                 {"grad_tol", scan.config.grad_tol},
                 {"energy_tol", scan.config.energy_tol},
                 {"stall_window", scan.config.stall_window},
                 {"backtracking", scan.config.backtracking},
                 {"seed", scan.config.seed},
                 {"divergence_floor", scan.config.divergence_floor}};
  ojson entries = ojson::array();
  for (std::size_t i = 0; i < scan.c_values.size(); ++i) {
    ojson e;
    e["c"] = scan.c_values[i];
    e["c_over_cstar"] = scan.c_values[i] / scan.cstar;
    e["classification"] = to_string(scan.classifications[i]);
    e["energy"] = number_or_null(scan.energies[i]);
    e["lambda"] = number_or_null(scan.lagranges[i]);
    e["iterations"] = scan.iterations[i];
    e["energy_uncertainty"] = scan.uncertainties[i];
    e["evidence"] = scan.evidence[i];
    e["witness"] = {{"parameters", array_of(scan.witness_parameters[i])},
                    {"energies", array_of(scan.witness_energies[i])}};
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

std::string scan_to_csv(const ScanResult& scan, std::string_view hash) {
  std::string s = "# masslab scan schema_version=" + std::to_string(kSchemaVersion) + " config_hash=" +
                  std::string(hash) + "\n";
  s += "c,energy,classification,lambda,iterations\n";
  for (std::size_t i = 0; i < scan.c_values.size(); ++i) {
    s += format_double(scan.c_values[i]) + "," + format_double(scan.energies[i]) + "," +
         to_string(scan.classifications[i]) + "," + format_double(scan.lagranges[i]) + "," +
         std::to_string(scan.iterations[i]) + "\n";
  }
  return s;
}

void write_text_file(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("failed writing " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ConfigError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Potential parse_potential(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ConfigError("potential must look like kind:args, got '" + std::string(spec) + "'");
  const std::string kind(spec.substr(0, colon));
  const std::string args(spec.substr(colon + 1));
  auto number = [&](const std::string& text) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw ConfigError("bad number '" + text + "' in potential " + std::string(spec));
    return x;
  };
  if (kind == "harmonic") return Potential::harmonic(number(args));
  if (kind == "gaussian") {
    const auto comma = args.find(',');
    if (comma == std::string::npos) return Potential::gaussian(number(args));
    return Potential::gaussian(number(args.substr(0, comma)), number(args.substr(comma + 1)));
  }
  if (kind == "table") {
    std::istringstream in(read_text_file(args));
    std::vector<double> r, v;
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream row(line);
      double a, b;
      if (!(row >> a)) continue;
      if (!(row >> b)) throw ConfigError("table " + args + ": row without a value");
      r.push_back(a);
      v.push_back(b);
    }
    return Potential::table(std::move(r), std::move(v));
  }
  throw ConfigError("unknown potential kind '" + kind + "' (harmonic, gaussian, table)");
}

std::string eigen_to_text(const EigenResult& eig, const Potential& potential, std::string_view hash) {
  const auto& g = eig.eigenfunction.grid();
  std::string s = "# masslab eigenfunction schema_version=" + std::to_string(kSchemaVersion) + "\n";
  s += "config_hash " + std::string(hash) + "\n";
  s += "potential " + potential.describe() + "\n";
  s += "dim " + std::to_string(g.dim()) + "\n";
  s += "points " + std::to_string(g.size()) + "\n";
  s += "radius " + format_double(eig.domain_radius) + "\n";
  s += "mu1 " + format_double(eig.mu1) + "\n";
  s += "columns r phi\n";
  for (std::size_t i = 0; i < g.size(); ++i) s += format_double(g.node(i)) + " " + format_double(eig.eigenfunction[i]) + "\n";
  return s;
}

GroundState cached_ground_state(int dim, const GroundStateConfig& cfg) {
  const char* dir = std::getenv("MASSLAB_CACHE");
  if (!dir || !*dir) return solve_ground_state(dim, cfg);
  const std::string key = config_hash(canonical(cfg, dim));
  const auto path = (std::filesystem::path(dir) / ("ground_state_N" + std::to_string(dim) + "_" + key + ".txt")).string();
  if (std::filesystem::exists(path)) {
    try {
      return load_ground_state(path);
    } catch (const ConfigError&) {
      // Stale or damaged entry: fall through and replace it.
    }
  }
  auto gs = solve_ground_state(dim, cfg);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError(std::string("cannot create cache directory ") + dir + ": " + ec.message());
  save_ground_state(gs, path + ".part", key);
  std::filesystem::rename(path + ".part", path, ec);
  if (ec) throw ConfigError("cannot store cached ground state " + path);
  return gs;
}

}  // namespace masslab
