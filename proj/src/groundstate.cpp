#include "masslab/groundstate.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "banded.hpp"
#include "masslab/error.hpp"
#include "masslab/functionals.hpp"

namespace masslab {

std::size_t default_points(int dim) { return dim == 1 ? 4096 : 2048; }
double default_r_max(int dim) { return dim == 1 ? 20.0 : 16.0; }

namespace {

constexpr char kMagic[] = "# masslab ground state v1";

double omega(int n) {
  constexpr double pi = 3.14159265358979323846;
  return n == 1 ? 2.0 : (n == 2 ? 2.0 * pi : 4.0 * pi);
}

// Radial ODE Q'' = -(N-1)/r Q' + Q - |Q|^{p-2} Q, with the mass integrand carried along.
struct Shooter {
  int n;
  double p;
  double h;
  double r_end;

  struct State {
    double q, dq, m;
  };

  State rhs(double r, const State& y) const {
    const double f = y.q - std::pow(std::abs(y.q), p - 2.0) * y.q;
    return {y.dq, -(n - 1.0) / r * y.dq + f, omega(n) * std::pow(r, n - 1) * y.q * y.q};
  }

  struct Run {
    int outcome = 0;  // -1 undershoot (Q' > 0), +1 overshoot (Q < 0)
    std::vector<double> q, dq, m;
  };

  Run run(double a, bool record) const {
    Run out;
    const double b = (a - std::pow(a, p - 1.0)) / n;
    State y{a + 0.5 * b * h * h, b * h, omega(n) * a * a * std::pow(h, n) / n};
    if (record) {
      out.q = {a, y.q};
      out.dq = {0.0, y.dq};
      out.m = {0.0, y.m};
    }
    const auto steps = static_cast<std::size_t>(r_end / h);
    for (std::size_t k = 1; k < steps; ++k) {
      const double r = h * static_cast<double>(k);
      auto add = [](const State& s, const State& d, double f) {
        return State{s.q + f * d.q, s.dq + f * d.dq, s.m + f * d.m};
      };
      const State k1 = rhs(r, y);
      const State k2 = rhs(r + 0.5 * h, add(y, k1, 0.5 * h));
      const State k3 = rhs(r + 0.5 * h, add(y, k2, 0.5 * h));
      const State k4 = rhs(r + h, add(y, k3, h));
      y.q += h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
      y.dq += h / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
      y.m += h / 6.0 * (k1.m + 2.0 * k2.m + 2.0 * k3.m + k4.m);
      if (record) {
        out.q.push_back(y.q);
        out.dq.push_back(y.dq);
        out.m.push_back(y.m);
      }
      if (y.q < 0.0) {
        out.outcome = 1;
        return out;
      }
      if (y.dq > 0.0) {
        out.outcome = -1;
        return out;
      }
    }
    return out;
  }
};

// Decaying solution of the linearized equation -Delta f + f = 0.
double tail_shape(int n, double r) {
  switch (n) {
    case 1:
      return std::exp(-r);
    case 2:
      return std::cyl_bessel_k(0.0, r);
    default:
      return std::exp(-r) / r;
  }
}

struct ShootingResult {
  double q0;
  double cstar_ode;
  double h;
  double r_match;
  double amplitude;
  std::vector<double> q, dq;
};

ShootingResult shoot(int n, const GroundStateConfig& cfg) {
  Shooter s{n, 2.0 + 4.0 / n, cfg.ode_step, 60.0};
  if (!(s.h > 0.0)) throw ConfigError("ODE step must be positive");

  // Scan for the first overshoot, keeping the last undershoot below it.
  double lo = -1.0, hi = -1.0;
  const int samples = 400;
  const double ratio = std::pow(cfg.bracket_hi / cfg.bracket_lo, 1.0 / samples);
  double a = cfg.bracket_lo;
  for (int k = 0; k <= samples; ++k, a *= ratio) {
    const int o = s.run(a, false).outcome;
    if (o < 0) lo = a;
    if (o > 0 && lo > 0.0) {
      hi = a;
      break;
    }
  }
  if (lo < 0.0 || hi < 0.0)
    throw SolverError("shooting bracket for Q(0) not found in [" + std::to_string(cfg.bracket_lo) + ", " +
                      std::to_string(cfg.bracket_hi) + "]");

  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (s.run(mid, false).outcome > 0 ? hi : lo) = mid;
  }

  const auto rl = s.run(lo, true);
  const auto rh = s.run(hi, true);
  const std::size_t len = std::min(rl.q.size(), rh.q.size());
  // Trust the trajectory until the two bracketing runs separate or Q gets small.
  std::size_t km = len - 1;
  for (std::size_t k = 1; k < len; ++k) {
    const double qa = 0.5 * (rl.q[k] + rh.q[k]);
    if (std::abs(rl.q[k] - rh.q[k]) > 1e-9 * qa || qa < 1e-6 * lo) {
      km = k;
      break;
    }
  }

  ShootingResult out;
  out.q0 = 0.5 * (lo + hi);
  out.h = s.h;
  out.q.resize(km + 1);
  out.dq.resize(km + 1);
  for (std::size_t k = 0; k <= km; ++k) {
    out.q[k] = 0.5 * (rl.q[k] + rh.q[k]);
    out.dq[k] = 0.5 * (rl.dq[k] + rh.dq[k]);
  }
  out.r_match = s.h * static_cast<double>(km);
  out.amplitude = out.q[km] / tail_shape(n, out.r_match);

  // Tail mass by Simpson's rule on the linear tail.
  const double step = 1e-3;
  const int cells = 40000;
  double tail = 0.0;
  for (int k = 0; k <= cells; ++k) {
    const double r = out.r_match + step * k;
    const double f = out.amplitude * tail_shape(n, r);
    const double wgt = (k == 0 || k == cells) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    tail += wgt * omega(n) * std::pow(r, n - 1) * f * f;
  }
  tail *= step / 3.0;
  out.cstar_ode = 0.5 * (rl.m[km] + rh.m[km]) + tail;
  return out;
}

// Cubic Hermite sample of the shooting profile, linear tail beyond the match point.
double sample_profile(const ShootingResult& s, int n, double r) {
  if (r >= s.r_match) return s.amplitude * tail_shape(n, r);
  const double x = r / s.h;
  auto k = static_cast<std::size_t>(x);
  if (k + 1 >= s.q.size()) k = s.q.size() - 2;
  const double t = x - static_cast<double>(k);
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  return h00 * s.q[k] + h10 * s.h * s.dq[k] + h01 * s.q[k + 1] + h11 * s.h * s.dq[k + 1];
}

double nehari_scale(const Field& u, double p) {
  const double kin = dirichlet_integral(u);
  const double lp = lp_integral(u, p);
  return std::pow((kin + u.mass()) / lp, 1.0 / (p - 2.0));
}

// Newton on K u + W (u - |u|^{p-2} u) = 0 over the free nodes.
double newton_polish(std::vector<double>& u, const RadialGrid& g, int steps) {
  const std::size_t m = g.size();
  const std::size_t n = m - 1;
  const double p = 2.0 + 4.0 / g.dim();
  u[m - 1] = 0.0;
  std::vector<double> ku(m), diag(n);
  Eigen::VectorXd f(n);
  auto residual = [&]() {
    g.kinetic().apply(u, ku);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = ku[i] + g.weight(i) * (u[i] - std::pow(std::abs(u[i]), p - 2.0) * u[i]);
      worst = std::max(worst, std::abs(f[i]) / g.weight(i));
    }
    return worst;
  };
  double res = residual();
  for (int it = 0; it < steps && res > 1e-14 * std::abs(u[0]); ++it) {
    for (std::size_t i = 0; i < n; ++i)
      diag[i] = g.weight(i) * (1.0 - (p - 1.0) * std::pow(std::abs(u[i]), p - 2.0));
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(detail::kinetic_plus_diag(g, diag, n));
    if (lu.info() != Eigen::Success) throw SolverError("Newton Jacobian factorization failed");
    const Eigen::VectorXd d = lu.solve(f);
    for (std::size_t i = 0; i < n; ++i) u[i] -= d[i];
    const double next = residual();
    if (!std::isfinite(next)) throw NumericalError("Newton polish produced non-finite values");
    res = next;
  }
  return res;
}

}  // namespace

double action_functional(const Field& u) {
  const int n = u.grid().dim();
  return 0.5 * (dirichlet_integral(u) + u.mass()) - n / (2.0 * n + 4.0) * lp_integral(u, 2.0 + 4.0 / n);
}

void populate_diagnostics(GroundState& gs) {
  const auto& q = gs.profile;
  const auto& g = q.grid();
  const int n = g.dim();
  const double kin = dirichlet_integral(q);
  const double lp = lp_integral(q, 2.0 + 4.0 / n);
  const double c = q.mass();
  gs.dim = n;
  gs.cstar = c;
  const double a = lp, b = (n + 2.0) / n * kin, d = 0.5 * (n + 2.0) * c;
  gs.identity_residuals = {std::abs(a - b) / a, std::abs(a - d) / a, std::abs(b - d) / a};
  gs.action_J = action_functional(q);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double r = g.node(i);
    if (r < 0.5 * g.r_max() || r > 0.75 * g.r_max() || !(q[i] > 0.0)) continue;
    const double y = std::log(q[i]) + 0.5 * (n - 1) * std::log(r);
    sx += r;
    sy += y;
    sxx += r * r;
    sxy += r * y;
    ++cnt;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  gs.decay_check = std::abs(slope + 1.0);
}

GroundState solve_ground_state(int dim, const GroundStateConfig& cfg) {
  if (dim < 1 || dim > 3) throw ConfigError("ground state dimension must be 1, 2 or 3");
  const std::size_t points = cfg.points ? cfg.points : default_points(dim);
  const double r_max = cfg.r_max > 0.0 ? cfg.r_max : default_r_max(dim);
  auto grid = build_grid(dim, r_max, points);

  const auto sh = shoot(dim, cfg);
  std::vector<double> u(grid->size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = sample_profile(sh, dim, grid->node(i));

  GroundState gs;
  gs.residual = newton_polish(u, *grid, cfg.newton_steps);
  gs.profile = Field(grid, std::move(u));
  gs.q0 = sh.q0;
  gs.cstar_ode = sh.cstar_ode;
  populate_diagnostics(gs);

  for (double r : gs.identity_residuals)
    if (!(r <= cfg.identity_tol)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "ground state identity residual %.3e exceeds %.1e (grid too coarse?)", r,
                    cfg.identity_tol);
      throw AccuracyError(buf);
    }
  return gs;
}

FlowGroundState solve_ground_state_flow(int dim, GridPtr grid, double tau, int max_iter, double tol) {
  if (!grid || grid->dim() != dim) throw ConfigError("flow solver grid dimension mismatch");
  if (!(tau > 0.0)) throw ConfigError("flow step must be positive");
  const auto& g = *grid;
  const std::size_t m = g.size(), n = m - 1;
  const double p = 2.0 + 4.0 / dim;

  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = (1.0 + 1.0 / tau) * g.weight(i);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(detail::kinetic_plus_diag(g, diag, n));
  if (solver.info() != Eigen::Success) throw SolverError("flow operator factorization failed");

  Field u = Field::sample(grid, [](double r) { return std::exp(-0.5 * r * r); });
  u.transform([&](std::size_t i, double v) { return i + 1 == m ? 0.0 : v; });
  u = u.scaled(nehari_scale(u, p));

  FlowGroundState out;
  Eigen::VectorXd rhs(n);
  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i)
      rhs[i] = g.weight(i) * (u[i] / tau + std::pow(std::abs(u[i]), p - 2.0) * u[i]);
    const Eigen::VectorXd x = solver.solve(rhs);
    std::vector<double> v(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i];
    Field next(grid, std::move(v));
    next = next.scaled(nehari_scale(next, p));
    double diff = 0.0, top = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      diff = std::max(diff, std::abs(next[i] - u[i]));
      top = std::max(top, std::abs(next[i]));
    }
    if (!std::isfinite(diff)) throw NumericalError("flow ground state diverged");
    u = std::move(next);
    out.iterations = it;
    out.update_norm = diff / top;
    if (out.update_norm < tol) {
      out.converged = true;
      break;
    }
  }
  out.cstar = u.mass();
  out.profile = std::move(u);
  return out;
}

double action(const GroundState& gs) { return action_functional(gs.profile); }

double certify_gn(const GroundState& gs) {
  return gn_gap(gs.profile, gs.cstar) / lp_integral(gs.profile, 2.0 + 4.0 / gs.dim);
}

void save_ground_state(const GroundState& gs, const std::string& path, const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write ground state file " + path);
  const auto& g = gs.profile.grid();
  char buf[96];
  out << kMagic << "\n";
  if (!config_hash.empty()) out << "config_hash " << config_hash << "\n";
  out << "dim " << g.dim() << "\n";
  out << "points " << g.size() << "\n";
  std::snprintf(buf, sizeof buf, "r_max %.17g\n", g.r_max());
  out << buf;
  std::snprintf(buf, sizeof buf, "cstar %.17g\n", gs.cstar);
  out << buf;
  std::snprintf(buf, sizeof buf, "q0 %.17g\n", gs.q0);
  out << buf;
  std::snprintf(buf, sizeof buf, "cstar_ode %.17g\n", gs.cstar_ode);
  out << buf;
  std::snprintf(buf, sizeof buf, "residual %.17g\n", gs.residual);
  out << buf;
  out << "columns r Q\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", g.node(i), gs.profile[i]);
    out << buf;
  }
  if (!out) throw ConfigError("failed writing ground state file " + path);
}

GroundState load_ground_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read ground state file " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw ConfigError("not a ground state file: " + path);
  int dim = 0;
  std::size_t points = 0;
  double r_max = 0, cstar = 0, q0 = 0, cstar_ode = 0, residual = 0;
  while (std::getline(in, line) && line != "columns r Q") {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "dim") ls >> dim;
    else if (key == "points") ls >> points;
    else if (key == "r_max") ls >> r_max;
    else if (key == "cstar") ls >> cstar;
    else if (key == "q0") ls >> q0;
    else if (key == "cstar_ode") ls >> cstar_ode;
    else if (key == "residual") ls >> residual;
    else if (key == "config_hash") continue;
    else throw ConfigError("unknown header key '" + key + "' in " + path);
    if (ls.fail()) throw ConfigError("malformed header line '" + line + "' in " + path);
  }
  auto grid = build_grid(dim, r_max, points);
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) {
    double r = 0;
    if (!(in >> r >> v[i])) throw ConfigError("truncated ground state file " + path);
    if (std::abs(r - grid->node(i)) > 1e-12 * (1.0 + r)) throw ConfigError("node mismatch in " + path);
  }
  GroundState gs;
  gs.profile = Field(grid, std::move(v));
  gs.q0 = q0;
  gs.cstar_ode = cstar_ode;
  gs.residual = residual;
  populate_diagnostics(gs);
  if (std::abs(gs.cstar - cstar) > 1e-12 * cstar) throw ConfigError("stored c* does not match profile in " + path);
  return gs;
}

}  // namespace masslab
