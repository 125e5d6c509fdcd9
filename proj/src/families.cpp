#include "masslab/families.hpp"

#include <cmath>

#include "masslab/error.hpp"
#include "masslab/functionals.hpp"
#include "masslab/hartree.hpp"
#include "masslab/spline.hpp"

namespace masslab {

namespace {

FamilyPoint make_point(Field f, double parameter, double normalization, double c) {
  const double drift = std::abs(f.mass() - c) / c;
  return FamilyPoint{std::move(f), parameter, normalization, c, drift};
}

}  // namespace

FamilyPoint dilation_family(const Field& u, double c, double t, GridPtr target) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("dilation parameter must be positive");
  if (!(c > 0.0)) throw DomainError("family mass must be positive");
  if (std::abs(u.mass() - c) > kFamilyMassTol * c) throw DomainError("dilation_family: field mass differs from c");
  const auto& g = u.grid();
  const double amp = std::pow(t, 0.5 * g.dim());
  std::vector<double> v(u.values().begin(), u.values().end());
  for (double& x : v) x *= amp;
  Field f(g.rescaled(t), std::move(v));
  if (target) {
    if (target->dim() != g.dim()) throw ShapeError("target grid dimension mismatch");
    CubicSpline s(f.grid().nodes(), f.values(), 0.0, 0.0);
    f = Field::sample(target, [&](double r) { return s(r); });
  }
  auto point = make_point(std::move(f), t, 1.0, c);
  if (point.mass_drift > kFamilyMassTol)
    throw TruncationError("dilation by t = " + std::to_string(t) + " loses mass (drift " +
                          std::to_string(point.mass_drift) + ")");
  return point;
}

FamilyPoint scaled_Q_family(const GroundState& gs, double c, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("family parameter t must be positive");
  if (!(c > 0.0)) throw DomainError("family mass must be positive");
  const auto& g = gs.profile.grid();
  const double amp = std::pow(t, 0.5 * g.dim()) * std::sqrt(c / gs.cstar);
  std::vector<double> v(gs.profile.values().begin(), gs.profile.values().end());
  for (double& x : v) x *= amp;
  return make_point(Field(g.rescaled(t), std::move(v)), t, 1.0, c);
}

double scaled_Q_energy_closed_form(const GroundState& gs, double c, double t) {
  if (gs.dim != 3) throw ModelError("closed form applies to the SP model (N = 3)");
  const double a = 0.5 * dirichlet_integral(gs.profile);
  const double b = hartree_energy(gs.profile);
  const double k = c / gs.cstar;
  return t * t * k * a * (1.0 - std::pow(k, 2.0 / 3.0)) + t * k * k * b;
}

double cutoff_psi(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double s = 2.0 - r;  // 1 at r = 1, 0 at r = 2
  return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

FamilyPoint cutoff_family(const GroundState& gs, double c, double rho, double x0_radius) {
  if (!(rho >= 1.0) || !std::isfinite(rho)) throw DomainError("cutoff family requires rho >= 1");
  if (!(c > 0.0)) throw DomainError("family mass must be positive");
  if (!(x0_radius >= 0.0)) throw DomainError("x0 radius must be >= 0");
  const auto& g = gs.profile.grid();
  auto grid = g.rescaled(rho);
  const double amp = std::pow(rho, 0.5 * g.dim()) * std::sqrt(c / gs.cstar);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = amp * cutoff_psi(grid->node(i)) * gs.profile[i];
  Field raw(grid, std::move(v));
  const double m = raw.mass();
  if (!(m > 0.0)) throw DomainError("cutoff family has zero mass");
  const double a_rho = std::sqrt(c / m);
  return make_point(raw.scaled(a_rho), rho, a_rho, c);
}

Field mass_scale(const Field& u, double theta) {
  if (!(theta > 0.0)) throw DomainError("mass scale theta must be positive");
  return u.scaled(std::sqrt(theta));
}

DivergenceWitness divergence_witness(const std::function<double(double)>& energy_at, double p0, int k_max) {
  DivergenceWitness w;
  double e0 = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    const double p = p0 * std::ldexp(1.0, k);
    const double e = energy_at(p);
    if (!std::isfinite(e)) throw NumericalError("witness energy is not finite");
    if (k == 0) e0 = e;
    else w.decreases = e < w.energies.back() ? w.decreases + 1 : 0;
    w.parameters.push_back(p);
    w.energies.push_back(e);
    if (w.decreases >= kWitnessMinDecreases && e < -kWitnessFactor * (std::abs(e0) + 1.0)) {
      w.certified = true;
      break;
    }
  }
  return w;
}

}  // namespace masslab
