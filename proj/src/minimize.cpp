#include "masslab/minimize.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "banded.hpp"

namespace masslab {

void SolverConfig::validate() const {
  if (!(step > 0.0)) throw ConfigError("solver step must be positive");
  if (max_iter <= 0) throw ConfigError("max_iter must be positive");
  if (!(grad_tol > 0.0) || !(energy_tol > 0.0)) throw ConfigError("solver tolerances must be positive");
  if (stall_window <= 0) throw ConfigError("stall window must be positive");
  if (!(backtracking > 0.0 && backtracking < 1.0)) throw ConfigError("backtracking factor must lie in (0,1)");
  if (!(divergence_floor < 0.0)) throw ConfigError("divergence floor must be negative");
}

const char* to_string(MinimizeStatus s) {
  switch (s) {
    case MinimizeStatus::CONVERGED:
      return "CONVERGED";
    case MinimizeStatus::STALLED:
      return "STALLED";
    case MinimizeStatus::DIVERGED:
      return "DIVERGED";
    case MinimizeStatus::MAX_ITER:
      return "MAX_ITER";
  }
  return "?";
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::ZERO_NOT_ATTAINED:
      return "ZERO_NOT_ATTAINED";
    case Classification::ATTAINED:
      return "ATTAINED";
    case Classification::MINUS_INFINITY:
      return "MINUS_INFINITY";
  }
  return "?";
}

Field random_initial_field(GridPtr grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-0.1, 0.1), width(1.0, 2.0);
  const double s = width(rng);
  double eps[4];
  for (double& e : eps) e = amp(rng);
  const std::size_t last = grid->size() - 1;
  Field u = Field::sample(grid, [&](double r) {
    double pert = 1.0;
    for (int k = 0; k < 4; ++k) pert += eps[k] * std::cos((k + 1) * r / s);
    return std::exp(-0.5 * (r / s) * (r / s)) * pert;
  });
  u.transform([&](std::size_t i, double v) { return i == last ? 0.0 : v; });
  return u;
}

double lagrange_multiplier(const Model& model, const Field& u) {
  const double c = u.mass();
  if (!(c > 0.0)) throw DomainError("Lagrange multiplier of a zero field");
  return inner(gradient(model, u), u) / c;
}

MinimizeReport minimize_on_sphere(const Model& model, double c, GridPtr grid, const SolverConfig& cfg) {
  return minimize_on_sphere(model, c, random_initial_field(std::move(grid), cfg.seed), cfg);
}

MinimizeReport minimize_on_sphere(const Model& model, double c, const Field& init, const SolverConfig& cfg) {
  cfg.validate();
  model.validate();
  if (!(c > 0.0)) throw DomainError("mass c must be positive");
  if (init.empty() || init.grid().dim() != model.dim) throw ModelError("initial field does not match the model");

  const auto gp = init.grid_ptr();
  const auto& g = *gp;
  const std::size_t m = g.size(), n = m - 1;

  std::vector<double> pd(n);
  std::vector<double> vs;
  if (model.kind == ModelKind::SP_CONFINED) vs = model.potential->sample(g);
  for (std::size_t i = 0; i < n; ++i) pd[i] = g.weight(i) * (1.0 + (vs.empty() ? 0.0 : vs[i]));
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> precond(detail::kinetic_plus_diag(g, pd, n));
  if (precond.info() != Eigen::Success) throw SolverError("preconditioner factorization failed");

  Field u = init;
  u.transform([&](std::size_t i, double v) { return i == n ? 0.0 : v; });
  u = u.with_mass(c);

  auto project = [&](const std::vector<double>& v) { return Field(gp, v).with_mass(c); };
  auto weighted = [&](const Field& f, Eigen::VectorXd& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = g.weight(i) * f[i];
  };

  MinimizeReport rep;
  rep.model = model;
  rep.mass_c = c;

  auto residual = [&](const Field& f, const Field& gr) {
    const double lam = inner(gr, f) / c;
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = gr[i] - lam * f[i];
      r2 += g.weight(i) * r * r;
    }
    return std::pair{lam, std::sqrt(r2)};
  };
  // Preconditioned tangent direction d = P^{-1} W (g - mt u), W-orthogonal to u.
  // The slope d . W(g - mt u) is formed from the residual vector directly, which
  // avoids cancelling two O(lambda^2 c) terms.
  Eigen::VectorXd wg(n), wu(n);
  auto direction = [&](const Field& f, const Field& gr, Eigen::VectorXd& d) {
    weighted(gr, wg);
    weighted(f, wu);
    const Eigen::VectorXd a = precond.solve(wg);
    const Eigen::VectorXd b = precond.solve(wu);
    const Eigen::VectorXd resid = wg - (a.dot(wu) / b.dot(wu)) * wu;
    d = precond.solve(resid);
    return d.dot(resid);
  };

  auto [e, grad] = energy_and_gradient(model, u);
  if (!std::isfinite(e.total)) throw NumericalError("minimization produced non-finite energy");
  rep.energy_trace.push_back(e.total);
  std::tie(rep.lagrange, rep.grad_residual) = residual(u, grad);
  Eigen::VectorXd d(n), dc(n);
  double slope = direction(u, grad, d);
  double tau = cfg.step;
  const double tau_max = 20.0 * cfg.step;
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> residuals;

  for (int it = 0;; ++it) {
    rep.iterations = it;
    residuals.push_back(rep.grad_residual);
    if (rep.grad_residual <= cfg.grad_tol * (1.0 + std::abs(rep.lagrange)) * std::sqrt(c)) {
      rep.status = MinimizeStatus::CONVERGED;
      break;
    }
    if (e.total < cfg.divergence_floor) {
      rep.status = MinimizeStatus::DIVERGED;
      break;
    }
    const auto k = rep.energy_trace.size();
    if (k > static_cast<std::size_t>(cfg.stall_window)) {
      const double old = rep.energy_trace[k - 1 - cfg.stall_window];
      const double old_res = residuals[k - 1 - cfg.stall_window];
      // Energy changes shrink like the squared residual, so a flat energy only
      // means a stall when the residual has stopped falling as well.
      if (std::abs(e.total - old) <= cfg.energy_tol * std::abs(e.total) && rep.grad_residual > 0.5 * old_res) {
        rep.status = MinimizeStatus::STALLED;
        break;
      }
    }
    if (it >= cfg.max_iter) {
      rep.status = MinimizeStatus::MAX_ITER;
      break;
    }
    if (!(slope > 0.0)) {
      rep.status = MinimizeStatus::STALLED;
      break;
    }

    const double noise = 64.0 * eps * (e.A + e.B + e.C + std::abs(e.D));
    bool accepted = false;
    bool first = true;
    std::vector<double> trial(m, 0.0);
    for (int bt = 0; bt < 60; ++bt, first = false) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] - tau * d[i];
      Field cand = project(trial);
      auto [ec, gc] = energy_and_gradient(model, cand);
      if (!std::isfinite(ec.total)) throw NumericalError("minimization produced non-finite energy");
      // Below the rounding level of the energy sum, descent cannot be confirmed
      // from energies. The preconditioned squared residual decreases along the
      // flow near a minimum, so it has to fall instead.
      const bool rounding = tau * slope <= noise;
      const bool armijo = !rounding && ec.total <= e.total - 1e-4 * tau * slope;
      if (rounding && ec.total > e.total + noise) {
        tau *= cfg.backtracking;
        continue;
      }
      if (!armijo && !rounding) {
        tau *= cfg.backtracking;
        continue;
      }
      const double sc = direction(cand, gc, dc);
      if (armijo || sc < slope) {
        u = std::move(cand);
        e = ec;
        grad = std::move(gc);
        std::tie(rep.lagrange, rep.grad_residual) = residual(u, grad);
        std::swap(d, dc);
        slope = sc;
        accepted = true;
        break;
      }
      tau *= cfg.backtracking;
    }
    if (!accepted) {
      rep.status = MinimizeStatus::STALLED;
      break;
    }
    if (first) tau = std::min(2.0 * tau, tau_max);
    rep.energy_trace.push_back(e.total);
  }

  rep.breakdown = e;
  rep.energy = e.total;
  rep.energy_uncertainty = rep.grad_residual * rep.grad_residual + 1e-12 * std::abs(e.total);
  rep.minimizer = std::move(u);
  return rep;
}

namespace {

bool at_threshold(double c, double cstar) { return std::abs(c / cstar - 1.0) <= kThresholdTol; }

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// E(u^t) for t = 2^{-k}: the probe behind "inf <= 0". Also checks the GN lower bound
// (1 - (c/c*)^{2/N}) A + B <= E at every probe.
void zero_probe(const Model& model, double c, const GroundState& gs, ClassificationReport& rep) {
  const Field base = gs.profile.scaled(std::sqrt(c / gs.cstar));
  const double k = std::pow(c / gs.cstar, 2.0 / model.dim);
  bool decreasing = true, positive = true;
  for (int j = 0; j <= 10; ++j) {
    const double t = std::ldexp(1.0, -j);
    const auto pt = dilation_family(base, c, t);
    const auto e = energy(model, pt.field);
    const double bound = (1.0 - k) * e.A + e.B;
    if (e.total < bound - 1e-8 * (std::abs(e.total) + e.A)) rep.lower_bound_ok = false;
    if (!rep.energies.empty() && !(e.total < rep.energies.back())) decreasing = false;
    if (!(e.total > 0.0)) positive = false;
    rep.parameters.push_back(t);
    rep.energies.push_back(e.total);
  }
  // Independent smooth test fields for the lower bound.
  for (double s : {0.5, 1.0, 2.0, 4.0}) {
    Field v = Field::sample(gs.profile.grid_ptr(), [s](double r) { return std::exp(-0.5 * (r / s) * (r / s)); });
    v = v.with_mass(c);
    const auto e = energy(model, v);
    if (e.total < (1.0 - k) * e.A + e.B - 1e-8 * (std::abs(e.total) + e.A)) rep.lower_bound_ok = false;
  }
  const bool vanishing = rep.energies.back() < 1e-2 * rep.energies.front();
  if (!rep.lower_bound_ok)
    throw ClassificationError("lower bound (1-(c/c*)^{2/N})A + B <= E violated on a probe at c = " +
                              fmt("%.17g", c) + "; probes decreasing = " + (decreasing ? "yes" : "no"));
  if (!decreasing || !positive || !vanishing)
    throw ClassificationError("dilation probe does not decrease to 0 at c = " + fmt("%.17g", c) +
                              " although the lower bound holds");
  rep.classification = Classification::ZERO_NOT_ATTAINED;
  rep.energy = 0.0;
  rep.evidence = "E(u^t) > 0 decreasing to " + fmt("%.3e", rep.energies.back()) +
                 " as t -> 0; lower bound (1-(c/c*)^{2/N})A + B holds on all probes";
}

void infinity_witness(const Model& model, double c, const GroundState& gs, ClassificationReport& rep,
                      bool cutoff) {
  auto at = [&](double p) {
    const auto pt = cutoff ? cutoff_family(gs, c, p) : scaled_Q_family(gs, c, p);
    return energy(model, pt.field).total;
  };
  const auto w = divergence_witness(at);
  rep.parameters = w.parameters;
  rep.energies = w.energies;
  if (!w.certified)
    throw ClassificationError("c = " + fmt("%.17g", c) + " exceeds c* but the " +
                              (cutoff ? std::string("cutoff") : std::string("scaled-Q")) +
                              " witness did not certify divergence (last energy " + fmt("%.6e", w.energies.back()) +
                              ")");
  rep.classification = Classification::MINUS_INFINITY;
  rep.energy = -std::numeric_limits<double>::infinity();
  rep.evidence = std::string(cutoff ? "cutoff" : "scaled-Q") + " family energy decreased " +
                 std::to_string(w.decreases) + " consecutive doublings to " + fmt("%.6e", w.energies.back());
}

void attain(const Model& model, double c, const GroundState& gs, const SolverConfig& cfg,
            ClassificationReport& rep, const Field* init) {
  SolverConfig run = cfg;
  if (at_threshold(c, gs.cstar)) run.max_iter = 4 * cfg.max_iter;
  auto r = init ? minimize_on_sphere(model, c, *init, run) : minimize_on_sphere(model, c, gs.profile.grid_ptr(), run);
  if (r.status != MinimizeStatus::CONVERGED) {
    const std::string msg = "minimization at c = " + fmt("%.17g", c) + " ended " + to_string(r.status) +
                            " (energy " + fmt("%.6e", r.energy) + ", residual " + fmt("%.3e", r.grad_residual) +
                            ") where a minimizer is expected";
    throw ClassificationError(msg);
  }
  rep.classification = Classification::ATTAINED;
  rep.energy = r.energy;
  rep.energies = r.energy_trace;
  rep.evidence = "flow converged in " + std::to_string(r.iterations) + " iterations, lambda = " +
                 fmt("%.10g", r.lagrange);
  rep.minimize = std::move(r);
}

}  // namespace

ClassificationReport classify_infimum(const Model& model, double c, const GroundState& gs, const SolverConfig& cfg) {
  model.validate();
  if (gs.dim != model.dim) throw ModelError("ground state and model dimensions differ");
  if (!(c > 0.0)) throw DomainError("mass c must be positive");
  ClassificationReport rep;
  const bool above = c > gs.cstar && !at_threshold(c, gs.cstar);
  switch (model.kind) {
    case ModelKind::SP:
      if (above) infinity_witness(model, c, gs, rep, false);
      else zero_probe(model, c, gs, rep);
      break;
    case ModelKind::NLS:
      if (above) {
        infinity_witness(model, c, gs, rep, false);
      } else if (at_threshold(c, gs.cstar)) {
        const Field q = gs.profile.with_mass(c);
        attain(model, c, gs, cfg, rep, &q);
      } else {
        zero_probe(model, c, gs, rep);
      }
      break;
    case ModelKind::SP_CONFINED:
      if (above) infinity_witness(model, c, gs, rep, true);
      else attain(model, c, gs, cfg, rep, nullptr);
      break;
    case ModelKind::NLS_DECAYING:
      if (above) infinity_witness(model, c, gs, rep, false);
      else attain(model, c, gs, cfg, rep, nullptr);
      break;
  }
  return rep;
}

}  // namespace masslab
