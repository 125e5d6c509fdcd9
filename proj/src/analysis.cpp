#include "masslab/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <thread>

#include "masslab/families.hpp"

namespace masslab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// Rethrows the active exception with a prefix, keeping the library error type.
[[noreturn]] void rethrow_annotated(std::exception_ptr ep, const std::string& prefix) {
  try {
    std::rethrow_exception(ep);
  } catch (const ClassificationError& e) {
    throw ClassificationError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const ModelError& e) {
    throw ModelError(prefix + e.what());
  } catch (const SolverError& e) {
    throw SolverError(prefix + e.what());
  } catch (const AccuracyError& e) {
    throw AccuracyError(prefix + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what());
  } catch (const TruncationError& e) {
    throw TruncationError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

double band(const MinimizeReport& r) { return r.energy_uncertainty; }

// Minimizations at several masses from the seeded random start, deduplicated by
// exact mass value so symmetric requests share one solve.
std::map<double, MinimizeReport> minimize_many(const Model& model, const std::vector<double>& masses,
                                               const GroundState& gs, const SolverConfig& cfg) {
  std::vector<double> unique(masses);
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  std::vector<std::optional<MinimizeReport>> out(unique.size());
  parallel_for(unique.size(), [&](std::size_t i) {
    out[i] = minimize_on_sphere(model, unique[i], gs.profile.grid_ptr(), cfg);
  });
  std::map<double, MinimizeReport> m;
  for (std::size_t i = 0; i < unique.size(); ++i) m.emplace(unique[i], std::move(*out[i]));
  return m;
}

void require_minimizers(const Model& model) {
  if (model.kind == ModelKind::SP || model.kind == ModelKind::NLS)
    throw ModelError(std::string("model ") + to_string(model.kind) + " has no minimizers below c*");
}

}  // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads) {
  if (n == 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

ScanResult scan(const Model& model, const std::vector<double>& c_grid, const GroundState& gs,
                const SolverConfig& cfg, unsigned threads) {
  model.validate();
  cfg.validate();
  if (c_grid.empty()) throw DomainError("scan needs at least one mass");
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    if (!(c_grid[i] > 0.0) || !std::isfinite(c_grid[i])) throw DomainError("scan masses must be positive");
    if (i > 0 && c_grid[i] < c_grid[i - 1]) throw DomainError("scan masses must be sorted");
  }
  const std::size_t n = c_grid.size();
  std::vector<std::optional<ClassificationReport>> reps(n);
  std::vector<std::exception_ptr> errors(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        try {
          reps[i] = classify_infimum(model, c_grid[i], gs, cfg);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      },
      threads);
  for (std::size_t i = 0; i < n; ++i)
    if (errors[i]) rethrow_annotated(errors[i], "c = " + num(c_grid[i]) + ": ");

  ScanResult s;
  s.model = model;
  s.cstar = gs.cstar;
  s.c_values = c_grid;
  s.config = cfg;
  const auto& g = gs.profile.grid();
  s.grid_description = "dim=" + std::to_string(g.dim()) + " points=" + std::to_string(g.size()) +
                       " r_max=" + num(g.r_max());
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = *reps[i];
    s.energies.push_back(r.energy);
    s.classifications.push_back(r.classification);
    s.evidence.push_back(r.evidence);
    if (r.minimize) {
      s.lagranges.push_back(r.minimize->lagrange);
      s.iterations.push_back(r.minimize->iterations);
      s.uncertainties.push_back(r.minimize->energy_uncertainty);
      std::vector<double> its(r.energies.size());
      for (std::size_t k = 0; k < its.size(); ++k) its[k] = static_cast<double>(k);
      s.witness_parameters.push_back(std::move(its));
    } else {
      s.lagranges.push_back(kNaN);
      s.iterations.push_back(0);
      s.uncertainties.push_back(0.0);
      s.witness_parameters.push_back(r.parameters);
    }
    s.witness_energies.push_back(r.energies);
    s.reports.push_back(std::move(r.minimize));
  }
  return s;
}

bool threshold_structure_ok(const ScanResult& scan) {
  bool seen_infinity = false;
  for (auto c : scan.classifications) {
    if (c == Classification::MINUS_INFINITY) seen_infinity = true;
    else if (seen_infinity) return false;
  }
  return true;
}

MonotonicityReport monotonicity_check(const ScanResult& scan, double margin_factor) {
  if (scan.model.kind != ModelKind::SP_CONFINED) throw DomainError("monotonicity check needs an SP_CONFINED scan");
  MonotonicityReport rep;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < scan.c_values.size(); ++i) {
    if (scan.classifications[i] != Classification::ATTAINED) continue;
    if (scan.c_values[i] > scan.cstar * (1.0 + kThresholdTol)) continue;
    if (!idx.empty() && scan.c_values[i] == scan.c_values[idx.back()])
      throw DomainError("monotonicity check: repeated mass " + num(scan.c_values[i]));
    idx.push_back(i);
  }
  if (idx.size() < 4) throw DomainError("monotonicity check needs at least four attained masses in (0, c*]");
  for (auto i : idx) {
    const double c = scan.c_values[i];
    rep.c_values.push_back(c);
    rep.ratios.push_back(scan.energies[i] / (c * c));
  }
  rep.passed = true;
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
    const double c0 = rep.c_values[k], c1 = rep.c_values[k + 1];
    const double need =
        margin_factor * (scan.uncertainties[idx[k]] / (c0 * c0) + scan.uncertainties[idx[k + 1]] / (c1 * c1));
    const double gap = rep.ratios[k] - rep.ratios[k + 1];
    rep.gaps.push_back(gap);
    rep.required.push_back(need);
    if (!(gap > need) && rep.passed) {
      rep.passed = false;
      rep.message = "I_c/c^2 not strictly decreasing between c = " + num(c0) + " and c = " + num(c1) +
                    " (gap " + num(gap) + ", margin " + num(need) + ")";
      if (scan.reports[idx[k]]) rep.left = scan.reports[idx[k]]->minimizer;
      if (scan.reports[idx[k + 1]]) rep.right = scan.reports[idx[k + 1]]->minimizer;
    }
  }
  if (rep.passed) rep.message = "I_c/c^2 strictly decreasing over " + std::to_string(idx.size()) + " masses";
  return rep;
}

SmallMassReport small_mass_check(const ScanResult& scan) {
  SmallMassReport rep;
  for (std::size_t i = 0; i < scan.c_values.size(); ++i) {
    if (scan.classifications[i] != Classification::ATTAINED) continue;
    rep.c_values.push_back(scan.c_values[i]);
    rep.energies.push_back(scan.energies[i]);
  }
  if (rep.c_values.size() < 3) throw DomainError("small-mass check needs at least three attained masses");
  bool positive = true, increasing = true;
  for (std::size_t k = 0; k < rep.energies.size(); ++k) {
    if (!(rep.energies[k] > 0.0)) positive = false;
    if (k > 0 && !(rep.energies[k] > rep.energies[k - 1] && rep.c_values[k] > rep.c_values[k - 1]))
      increasing = false;
  }
  const double c1 = rep.c_values[0], c2 = rep.c_values[1];
  const double e1 = rep.energies[0], e2 = rep.energies[1];
  rep.intercept = e1 - c1 * (e2 - e1) / (c2 - c1);
  rep.passed = positive && increasing && std::abs(rep.intercept) < e1;
  rep.message = std::string(positive ? "" : "non-positive I_c; ") + (increasing ? "" : "I_c not increasing in c; ") +
                "linear extrapolation to c = 0 gives " + num(rep.intercept) + " against smallest I_c " + num(e1);
  return rep;
}

ContinuityReport continuity_probe(const Model& model, double c, const std::vector<double>& deltas,
                                  const GroundState& gs, const SolverConfig& cfg) {
  require_minimizers(model);
  if (deltas.empty()) throw DomainError("continuity probe needs at least one delta");
  std::vector<double> ds(deltas);
  std::sort(ds.begin(), ds.end(), std::greater<>());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!(ds[i] >= 0.0)) throw DomainError("continuity deltas must be >= 0");
    if (i > 0 && ds[i] == ds[i - 1]) throw DomainError("continuity deltas must be distinct");
  }
  if (!(c - ds.front() > 0.0) || c + ds.front() >= gs.cstar * (1.0 - kThresholdTol))
    throw DomainError("continuity probe leaves the attained range (0, c*)");

  std::vector<double> masses{c};
  for (double d : ds) {
    masses.push_back(c + d);
    masses.push_back(c - d);
  }
  auto sol = minimize_many(model, masses, gs, cfg);
  for (auto& [m, r] : sol)
    if (r.status != MinimizeStatus::CONVERGED)
      throw ModelError("continuity probe: no converged minimizer at c = " + num(m) + " (" + to_string(r.status) + ")");

  ContinuityReport rep;
  rep.c = c;
  rep.deltas = ds;
  const auto& base = sol.at(c);
  rep.energy = base.energy;
  std::vector<double> x, y, u;
  for (double d : ds) {
    const auto& f = sol.at(c + d);
    const auto& b = sol.at(c - d);
    rep.forward.push_back(f.energy - base.energy);
    rep.backward.push_back(base.energy - b.energy);
    if (d == 0.0) continue;
    x.push_back(d);
    y.push_back(f.energy - base.energy);
    u.push_back(band(f) + band(base));
    x.push_back(-d);
    y.push_back(b.energy - base.energy);
    u.push_back(band(b) + band(base));
  }
  rep.decreasing = true;
  for (std::size_t i = 1; i < ds.size(); ++i) {
    if (!(std::abs(rep.forward[i]) < std::abs(rep.forward[i - 1]))) rep.decreasing = false;
    if (!(std::abs(rep.backward[i]) < std::abs(rep.backward[i - 1]))) rep.decreasing = false;
  }
  // Lagrange interpolation of the signed differences, evaluated at delta = 0; the
  // bound propagates each point's uncertainty through the interpolation weights.
  // The fit without the outermost pair estimates the truncation error; a genuine
  // jump is reproduced by both fits and so is not absorbed by that estimate.
  auto extrapolate = [&](std::size_t first, double& spread) {
    double limit = 0.0;
    spread = 0.0;
    for (std::size_t j = first; j < x.size(); ++j) {
      double l = 1.0;
      for (std::size_t k = first; k < x.size(); ++k)
        if (k != j) l *= (0.0 - x[k]) / (x[j] - x[k]);
      limit += l * y[j];
      spread += std::abs(l) * u[j];
    }
    return limit;
  };
  double spread = 0.0, spread_reduced = 0.0;
  rep.limit = extrapolate(0, spread);
  rep.truncation = x.size() >= 4 ? std::abs(rep.limit - extrapolate(2, spread_reduced)) : 0.0;
  rep.bound = 10.0 * std::max(spread, cfg.energy_tol * std::abs(base.energy)) + rep.truncation;
  rep.passed = rep.decreasing && std::abs(rep.limit) <= rep.bound;
  rep.message = std::string(rep.decreasing ? "differences shrink with delta" : "differences do not shrink with delta") +
                "; extrapolated jump " + num(rep.limit) + " (bound " + num(rep.bound) + "); " +
                (rep.passed ? "consistent with continuity" : "not consistent with continuity");
  return rep;
}

const char* to_string(SubadditivityStatus s) {
  switch (s) {
    case SubadditivityStatus::STRICT:
      return "STRICT";
    case SubadditivityStatus::VIOLATED:
      return "VIOLATED";
    case SubadditivityStatus::INCONCLUSIVE:
      return "INCONCLUSIVE";
  }
  return "?";
}

namespace {
void require_decaying(const Model& model, double c, const GroundState& gs) {
  if (model.kind != ModelKind::NLS_DECAYING) throw ModelError("check needs the NLS_DECAYING model");
  model.validate();
  if (gs.dim != model.dim) throw ModelError("ground state and model dimensions differ");
  if (!(c > 0.0) || !(c < gs.cstar)) throw DomainError("mass must lie in (0, c*)");
}
}  // namespace

SubadditivityReport subadditivity_check(const Model& model, double c, const std::vector<double>& alphas,
                                        const GroundState& gs, const EigenResult& eig, const SolverConfig& cfg) {
  require_decaying(model, c, gs);
  if (model.mu < eig.mu1) throw DomainError("subadditivity needs mu >= mu1");
  std::vector<double> masses{c};
  for (double a : alphas) {
    if (!(a > 0.0 && a < c)) throw DomainError("alpha must lie in (0, c)");
    masses.push_back(a);
    masses.push_back(c - a);
  }
  auto sol = minimize_many(model, masses, gs, cfg);
  auto ok = [](const MinimizeReport& r) { return r.status == MinimizeStatus::CONVERGED; };

  SubadditivityReport rep;
  rep.c = c;
  const auto& fc = sol.at(c);
  rep.f_c = fc.energy;
  rep.passed = !alphas.empty();
  int strict = 0, violated = 0;
  for (double a : alphas) {
    const auto& fa = sol.at(a);
    const auto& fr = sol.at(c - a);
    SubadditivityEntry e;
    e.alpha = a;
    e.f_alpha = fa.energy;
    e.f_rest = fr.energy;
    e.gap = fa.energy + fr.energy - fc.energy;
    e.margin = 3.0 * (band(fa) + band(fr) + band(fc));
    if (!ok(fa) || !ok(fr) || !ok(fc)) e.status = SubadditivityStatus::INCONCLUSIVE;
    else if (e.gap > e.margin) e.status = SubadditivityStatus::STRICT;
    else e.status = SubadditivityStatus::VIOLATED;
    if (e.status != SubadditivityStatus::STRICT) rep.passed = false;
    strict += e.status == SubadditivityStatus::STRICT;
    violated += e.status == SubadditivityStatus::VIOLATED;
    rep.entries.push_back(e);
  }
  rep.message = std::to_string(strict) + " strict, " + std::to_string(violated) + " violated, " +
                std::to_string(rep.entries.size() - strict - violated) + " inconclusive";
  return rep;
}

ThetaReport theta_scaling_check(const Model& model, double c, double theta, const GroundState& gs,
                                const SolverConfig& cfg) {
  require_decaying(model, c, gs);
  if (!(theta > 1.0) || !(theta * c < gs.cstar)) throw DomainError("theta must satisfy 1 < theta and theta c < c*");
  auto sol = minimize_many(model, {c, theta * c}, gs, cfg);
  const auto& base = sol.at(c);
  ThetaReport rep;
  rep.c = c;
  rep.theta = theta;
  rep.f_c = base.energy;
  const auto scaled = energy(model, mass_scale(base.minimizer, theta));
  rep.scaled = scaled.total;
  rep.gap = theta * base.energy - scaled.total;
  rep.margin = 3.0 * theta * band(base) + 1e-12 * std::abs(scaled.total);
  const auto& other = sol.at(theta * c);
  if (other.status == MinimizeStatus::CONVERGED) rep.f_theta_c = other.energy;
  rep.passed = base.status == MinimizeStatus::CONVERGED && rep.gap > rep.margin;
  rep.message = "theta f(c) - F(sqrt(theta) u_c) = " + num(rep.gap) + " (margin " + num(rep.margin) + ")";
  if (rep.f_theta_c) rep.message += "; f(theta c) = " + num(*rep.f_theta_c);
  if (base.status != MinimizeStatus::CONVERGED) rep.message += "; base minimization " + std::string(to_string(base.status));
  return rep;
}

CoercivityReport coercivity_probe(const Model& model, double c, const GroundState& gs, int k_max) {
  model.validate();
  if (gs.dim != model.dim) throw ModelError("ground state and model dimensions differ");
  if (!(c > 0.0) || !(c < gs.cstar)) throw DomainError("coercivity probe needs 0 < c < c*");
  if (k_max < 3) throw DomainError("coercivity probe needs k_max >= 3");
  CoercivityReport rep;
  rep.c = c;
  const double kappa = std::pow(c / gs.cstar, 2.0 / model.dim);
  double pot = 0.0;
  if (model.kind == ModelKind::NLS_DECAYING) pot = model.mu * model.potential->bound() * c / 2.0;
  rep.bound_ok = true;
  for (int k = 0; k <= k_max; ++k) {
    const double t = std::ldexp(1.0, k);
    const auto pt = scaled_Q_family(gs, c, t);
    const auto e = energy(model, pt.field);
    const double lb = (1.0 - kappa) * e.A - pot;
    if (e.total < lb - 1e-9 * (std::abs(e.total) + e.A)) rep.bound_ok = false;
    rep.t.push_back(t);
    rep.energies.push_back(e.total);
    rep.lower_bounds.push_back(lb);
  }
  int from = k_max;
  while (from > 0 && rep.energies[from] > rep.energies[from - 1]) --from;
  rep.increasing_from = from;
  rep.passed = rep.bound_ok && from <= k_max - 3;
  rep.message = std::string(rep.bound_ok ? "lower bound holds" : "lower bound violated") +
                "; energy increases strictly from t = " + num(rep.t[from]) + " to " + num(rep.t.back()) +
                " reaching " + num(rep.energies.back());
  return rep;
}

NonexistenceEvidence nonexistence_evidence(const Model& model, double c, const GroundState& gs,
                                           const std::vector<std::uint64_t>& seeds, int max_iter) {
  if (model.kind != ModelKind::SP && model.kind != ModelKind::NLS)
    throw ModelError("nonexistence evidence applies to SP and NLS only");
  if (gs.dim != model.dim) throw ModelError("ground state and model dimensions differ");
  if (!(c > 0.0) || !(c < gs.cstar)) throw DomainError("nonexistence evidence needs 0 < c < c*");
  if (seeds.empty()) throw DomainError("nonexistence evidence needs at least one seed");
  NonexistenceEvidence ev;
  ev.c = c;
  ev.seeds = seeds;
  const std::size_t n = seeds.size();
  const GridPtr grids[2] = {gs.profile.grid_ptr(), gs.profile.grid().rescaled(0.5)};
  std::vector<MinimizeStatus> status(2 * n);
  std::vector<double> e(2 * n);
  parallel_for(2 * n, [&](std::size_t k) {
    SolverConfig cfg;
    cfg.seed = seeds[k / 2];
    cfg.max_iter = max_iter;
    const auto r = minimize_on_sphere(model, c, grids[k % 2], cfg);
    status[k] = r.status;
    e[k] = r.energy;
  });
  ev.consistent = true;
  for (std::size_t i = 0; i < n; ++i) {
    ev.statuses.push_back(status[2 * i]);
    ev.statuses_wide.push_back(status[2 * i + 1]);
    ev.energies.push_back(e[2 * i]);
    ev.energies_wide.push_back(e[2 * i + 1]);
    ev.ratios.push_back(e[2 * i + 1] / e[2 * i]);
    if (!(e[2 * i] > 0.0 && e[2 * i + 1] > 0.0 && ev.ratios.back() < 0.75)) ev.consistent = false;
  }
  ev.label = std::string("weak evidence only: ") +
             (ev.consistent ? "every flow ends on a positive-energy state that loses energy when the radius doubles"
                            : "some flow ended on a state whose energy did not fall with the radius") +
             "; nonexistence of critical points is not certified";
  return ev;
}

}  // namespace masslab
