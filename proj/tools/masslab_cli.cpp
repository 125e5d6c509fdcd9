// masslab: ground states, energies, minimization, threshold scans and the
// acceptance suite from the command line.
//
// Exit status: 0 success, 1 numerical failure (diagnostic JSON on stdout),
// 2 usage or configuration error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "masslab/analysis.hpp"
#include "masslab/certify.hpp"
#include "masslab/families.hpp"
#include "masslab/io.hpp"

using namespace masslab;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

struct ModelOptions {
  std::string kind = "sp";
  int dim = 3;
  std::string potential;
  std::optional<double> mu;
  double mu_factor = 1.5;
  double radius = 4.0;
};

struct GridOptions {
  std::size_t points = 0;
  double r_max = 0.0;
};

struct Options {
  ModelOptions model;
  GridOptions grid;
  SolverConfig solver;
  std::string units = "cstar";
  unsigned threads = 0;
  std::string out, json, csv;
};

void add_model(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("--model", m.kind, "sp, sp-confined, nls or nls-decaying")
      ->check(CLI::IsMember({"sp", "sp-confined", "nls", "nls-decaying"}));
  cmd->add_option("--dim", m.dim, "dimension for nls models (sp models are three-dimensional)")->check(CLI::Range(1, 3));
  cmd->add_option("--potential", m.potential,
                  "harmonic:A, gaussian:V0[,width] or table:PATH (defaults harmonic:1, gaussian:1)");
  cmd->add_option("--mu", m.mu, "coupling of the decaying potential");
  cmd->add_option("--mu-factor", m.mu_factor, "coupling as a multiple of mu1 when --mu is absent");
  cmd->add_option("--radius", m.radius, "ball radius R for mu1 when --mu-factor is used");
}

void add_grid(CLI::App* cmd, GridOptions& g) {
  cmd->add_option("--points", g.points, "grid nodes (default depends on the dimension)");
  cmd->add_option("--rmax", g.r_max, "grid radius (default depends on the dimension)");
}

void add_solver(CLI::App* cmd, SolverConfig& s) {
  cmd->add_option("--seed", s.seed, "seed of the random initial field");
  cmd->add_option("--max-iter", s.max_iter);
  cmd->add_option("--grad-tol", s.grad_tol);
  cmd->add_option("--energy-tol", s.energy_tol);
  cmd->add_option("--step", s.step);
}

GroundStateConfig gs_config(const GridOptions& g) {
  GroundStateConfig c;
  c.points = g.points;
  c.r_max = g.r_max;
  return c;
}

Model build_model(const ModelOptions& m) {
  if (m.kind == "sp") return Model::sp();
  if (m.kind == "nls") return Model::nls(m.dim);
  if (m.kind == "sp-confined") return Model::sp_confined(parse_potential(m.potential.empty() ? "harmonic:1" : m.potential));
  const Potential v = parse_potential(m.potential.empty() ? "gaussian:1" : m.potential);
  const double mu = m.mu ? *m.mu : m.mu_factor * compute_mu1(v, m.radius, 2048, m.dim).mu1;
  return Model::nls_decaying(m.dim, v, mu);
}

double to_raw(double c, const std::string& units, double cstar) { return units == "cstar" ? c * cstar : c; }

std::string run_hash(const Model& model, const SolverConfig& cfg, const GridOptions& g) {
  return config_hash(canonical(model) + canonical(cfg) + canonical(gs_config(g), model.dim));
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) return;
  write_text_file(path, text);
}

ojson energy_json(const EnergyBreakdown& e) {
  return {{"A", e.A}, {"B", e.B}, {"C", e.C}, {"D", e.D}, {"total", e.total}};
}

ojson trace_json(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(std::isfinite(x) ? ojson(x) : ojson(nullptr));
  return a;
}

int cmd_ground_state(int dim, const GridOptions& g, const std::string& out) {
  const auto cfg = gs_config(g);
  const auto gs = cached_ground_state(dim, cfg);
  if (!out.empty()) save_ground_state(gs, out, config_hash(canonical(cfg, dim)));
  ojson j;
  j["schema"] = "masslab.ground_state";
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = config_hash(canonical(cfg, dim));
  j["dim"] = dim;
  j["points"] = gs.profile.size();
  j["r_max"] = gs.profile.grid().r_max();
  j["cstar"] = gs.cstar;
  j["q0"] = gs.q0;
  j["identity_residuals"] = gs.identity_residuals;
  j["action_J"] = gs.action_J;
  j["decay_check"] = gs.decay_check;
  j["residual"] = gs.residual;
  if (!out.empty()) j["profile_file"] = out;
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int cmd_energy(const Options& o, double c, double t) {
  const Model model = build_model(o.model);
  const auto gs = cached_ground_state(model.dim, gs_config(o.grid));
  const double raw = to_raw(c, o.units, gs.cstar);
  const auto point = dilation_family(gs.profile.with_mass(raw), raw, t);
  const auto e = energy(model, point.field);
  ojson j;
  j["schema"] = "masslab.energy";
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = run_hash(model, o.solver, o.grid);
  j["model"] = model.describe();
  j["cstar"] = gs.cstar;
  j["c"] = raw;
  j["t"] = t;
  j["field"] = "dilated ground state scaled to mass c";
  j["energy"] = energy_json(e);
  j["mass_drift"] = point.mass_drift;
  const std::string text = j.dump(2) + "\n";
  emit(text, o.json);
  std::cout << text;
  return kOk;
}

int cmd_minimize(const Options& o, double c) {
  const Model model = build_model(o.model);
  const auto gs = cached_ground_state(model.dim, gs_config(o.grid));
  const double raw = to_raw(c, o.units, gs.cstar);
  const auto rep = minimize_on_sphere(model, raw, gs.profile.grid_ptr(), o.solver);
  const std::string hash = run_hash(model, o.solver, o.grid);
  ojson j;
  j["schema"] = "masslab.minimize";
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = hash;
  j["model"] = model.describe();
  j["cstar"] = gs.cstar;
  j["c"] = raw;
  j["status"] = to_string(rep.status);
  j["energy"] = std::isfinite(rep.energy) ? ojson(rep.energy) : ojson(nullptr);
  j["lambda"] = rep.lagrange;
  j["grad_residual"] = rep.grad_residual;
  j["iterations"] = rep.iterations;
  j["energy_uncertainty"] = rep.energy_uncertainty;
  j["energy_trace"] = trace_json(rep.energy_trace);
  const std::string text = j.dump(2) + "\n";
  emit(text, o.json);
  if (!o.csv.empty()) {
    std::string csv = "# masslab minimizer schema_version=" + std::to_string(kSchemaVersion) + " config_hash=" + hash + "\n";
    csv += "columns r u\n";
    const auto& g = rep.minimizer.grid();
    for (std::size_t i = 0; i < g.size(); ++i) csv += format_double(g.node(i)) + "," + format_double(rep.minimizer[i]) + "\n";
    write_text_file(o.csv, csv);
  }
  std::cout << text;
  return rep.status == MinimizeStatus::CONVERGED ? kOk : kNumerical;
}

int cmd_scan(const Options& o, const std::vector<double>& grid) {
  const Model model = build_model(o.model);
  const auto gs = cached_ground_state(model.dim, gs_config(o.grid));
  std::vector<double> raw;
  for (double c : grid) raw.push_back(to_raw(c, o.units, gs.cstar));
  const auto s = scan(model, raw, gs, o.solver, o.threads);
  const std::string hash = run_hash(model, o.solver, o.grid);
  emit(scan_to_json(s, hash), o.json);
  emit(scan_to_csv(s, hash), o.csv);
  std::printf("# %s  c* = %.12g  config_hash %s\n", model.describe().c_str(), gs.cstar, hash.c_str());
  std::printf("%-12s %-12s %-18s %-22s %s\n", "c/c*", "c", "classification", "energy", "lambda");
  for (std::size_t i = 0; i < raw.size(); ++i)
    std::printf("%-12.6g %-12.6g %-18s %-22.15g %.10g\n", raw[i] / gs.cstar, raw[i], to_string(s.classifications[i]),
                s.energies[i], s.lagranges[i]);
  return kOk;
}

int cmd_mu1(const Options& o, const std::string& potential, double radius) {
  const Potential v = parse_potential(potential);
  const std::size_t points = o.grid.points ? o.grid.points : 2048;
  const auto eig = compute_mu1(v, radius, points, o.model.dim);
  const std::string hash = config_hash("eigen.dim=" + std::to_string(o.model.dim) + "\neigen.points=" +
                                       std::to_string(points) + "\neigen.potential=" + v.describe() +
                                       "\neigen.radius=" + format_double(radius) + "\n");
  emit(eigen_to_text(eig, v, hash), o.out);
  ojson j;
  j["schema"] = "masslab.mu1";
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = hash;
  j["potential"] = v.describe();
  j["radius"] = radius;
  j["dim"] = o.model.dim;
  j["points"] = points;
  j["mu1"] = eig.mu1;
  j["iterations"] = eig.iterations;
  if (!o.out.empty()) j["phi_file"] = o.out;
  const std::string text = j.dump(2) + "\n";
  emit(text, o.json);
  std::cout << text;
  return kOk;
}

int cmd_certify(const CertifyOptions& opts, const std::string& out) {
  const auto rep = certify(opts);
  emit(certify_to_json(rep), out);
  std::cout << certify_matrix(rep);
  return rep.all_passed() ? kOk : kNumerical;
}

void diagnostic(const std::string& command, const char* type, const std::string& message) {
  ojson j;
  j["schema"] = "masslab.error";
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["error"] = type;
  j["message"] = message;
  std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"masslab: threshold masses for Schrodinger-Poisson and related models"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a TOML or INI file");
  Options o;
  CertifyOptions copts;
  int gs_dim = 3;
  double c = 0.5, t = 1.0;
  std::vector<double> c_grid;
  std::string mu1_potential = "gaussian:1.0";
  double mu1_radius = 4.0;
  bool no_determinism = false;

  auto* gs = app.add_subcommand("ground-state", "solve for Q and c*, optionally persisting the profile");
  gs->add_option("--dim", gs_dim)->check(CLI::Range(1, 3));
  add_grid(gs, o.grid);
  gs->add_option("--out", o.out, "profile file");

  auto* en = app.add_subcommand("energy", "energy breakdown of the dilated ground state at mass c");
  add_model(en, o.model);
  add_grid(en, o.grid);
  en->add_option("--c", c, "mass")->required();
  en->add_option("--t", t, "dilation parameter")->check(CLI::PositiveNumber);
  en->add_option("--units", o.units)->check(CLI::IsMember({"cstar", "raw"}));
  en->add_option("--json", o.json);

  auto* mn = app.add_subcommand("minimize", "minimize the energy on the sphere of mass c");
  add_model(mn, o.model);
  add_grid(mn, o.grid);
  add_solver(mn, o.solver);
  mn->add_option("--c", c, "mass")->required();
  mn->add_option("--units", o.units)->check(CLI::IsMember({"cstar", "raw"}));
  mn->add_option("--json", o.json, "report file");
  mn->add_option("--csv", o.csv, "minimizer profile file");

  auto* sc = app.add_subcommand("scan", "classify the infimum over a list of masses");
  add_model(sc, o.model);
  add_grid(sc, o.grid);
  add_solver(sc, o.solver);
  sc->add_option("--c-grid", c_grid, "comma-separated masses")->delimiter(',')->required();
  sc->add_option("--units", o.units)->check(CLI::IsMember({"cstar", "raw"}));
  sc->add_option("--threads", o.threads, "workers (0 = hardware concurrency)");
  sc->add_option("--json", o.json);
  sc->add_option("--csv", o.csv);

  auto* mu = app.add_subcommand("mu1", "principal weighted Dirichlet eigenvalue on a ball");
  mu->add_option("--potential", mu1_potential);
  mu->add_option("--radius", mu1_radius)->check(CLI::PositiveNumber);
  mu->add_option("--dim", o.model.dim)->check(CLI::Range(1, 3));
  mu->add_option("--points", o.grid.points);
  mu->add_option("--out", o.out, "eigenfunction file");
  mu->add_option("--json", o.json);

  auto* ce = app.add_subcommand("certify", "run the acceptance suite and print the pass/fail matrix");
  ce->add_option("--seed", copts.seed);
  ce->add_option("--threads", copts.threads);
  ce->add_flag("--no-determinism", no_determinism, "skip the second run");
  ce->add_option("--out", o.out, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (*gs) return cmd_ground_state(gs_dim, o.grid, o.out);
    if (*en) return cmd_energy(o, c, t);
    if (*mn) return cmd_minimize(o, c);
    if (*sc) return cmd_scan(o, c_grid);
    if (*mu) return cmd_mu1(o, mu1_potential, mu1_radius);
    copts.determinism = !no_determinism;
    return cmd_certify(copts, o.out);
  } catch (const ConfigError& e) {
    std::cerr << "masslab " << name << ": " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "masslab " << name << ": " << e.what() << "\n";
    return kUsage;
  } catch (const ModelError& e) {
    std::cerr << "masslab " << name << ": " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    diagnostic(name, "numerical", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    diagnostic(name, "internal", e.what());
    return kNumerical;
  }
}
