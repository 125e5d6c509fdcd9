#include "masslab/functionals.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "masslab/error.hpp"
#include "masslab/hartree.hpp"
#include "masslab/spline.hpp"

namespace masslab {

struct Potential::Table {
  std::vector<double> r;
  std::vector<double> v;
  CubicSpline spline;
  Tail tail;
  double last_r;
  double last_v;
  double max_v;
};

Potential::Potential(PotentialKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

Potential Potential::harmonic(double a) {
  if (!(a > 0.0)) throw ConfigError("harmonic coefficient must be positive");
  return Potential(PotentialKind::HARMONIC, a, 0.0);
}

Potential Potential::gaussian(double v0, double width) {
  if (!(v0 > 0.0) || !(width > 0.0)) throw ConfigError("gaussian potential needs V0 > 0 and width > 0");
  return Potential(PotentialKind::GAUSSIAN_DECAY, v0, width);
}

Potential Potential::table(std::vector<double> r, std::vector<double> v, Tail tail) {
  if (r.size() < 3 || r.size() != v.size()) throw ConfigError("potential table needs >= 3 matching samples");
  double vmax = 0.0;
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError("potential table values must be finite and >= 0");
    vmax = std::max(vmax, x);
  }
  if (r.front() != 0.0) throw ConfigError("potential table must start at r = 0");
  CubicSpline s(r, v, 0.0, v.back());
  Potential p(PotentialKind::TABLE, 0.0, 0.0);
  const double lr = r.back();
  const double lv = v.back();
  p.table_ = std::make_shared<const Table>(Table{std::move(r), std::move(v), std::move(s), tail, lr, lv, vmax});
  return p;
}

double Potential::base(double r) const {
  switch (kind_) {
    case PotentialKind::HARMONIC:
      return a_ * r * r;
    case PotentialKind::GAUSSIAN_DECAY:
      return a_ * std::exp(-(r / b_) * (r / b_));
    case PotentialKind::TABLE: {
      const auto& t = *table_;
      if (r <= t.last_r) return std::max(0.0, t.spline(r));
      if (t.tail == Tail::QUADRATIC) return t.last_v * (r / t.last_r) * (r / t.last_r);
      return t.last_v;
    }
  }
  return 0.0;
}

double Potential::base_derivative(double r) const {
  switch (kind_) {
    case PotentialKind::HARMONIC:
      return 2.0 * a_ * r;
    case PotentialKind::GAUSSIAN_DECAY:
      return -2.0 * r / (b_ * b_) * a_ * std::exp(-(r / b_) * (r / b_));
    case PotentialKind::TABLE: {
      const auto& t = *table_;
      if (r <= t.last_r) return t.spline.derivative(r);
      if (t.tail == Tail::QUADRATIC) return 2.0 * t.last_v * r / (t.last_r * t.last_r);
      return 0.0;
    }
  }
  return 0.0;
}

double Potential::operator()(double r) const { return base(r + offset_); }
double Potential::derivative(double r) const { return base_derivative(r + offset_); }

std::vector<double> Potential::sample(const RadialGrid& grid) const {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (*this)(grid.node(i));
  return v;
}

Potential Potential::shifted(double x0) const {
  if (!(x0 >= 0.0)) throw DomainError("potential shift must be >= 0");
  Potential p(*this);
  p.offset_ = x0;
  return p;
}

bool Potential::confining() const {
  return kind_ == PotentialKind::HARMONIC ||
         (kind_ == PotentialKind::TABLE && table_->tail == Tail::QUADRATIC && table_->last_v > 0.0);
}

bool Potential::decaying() const {
  return kind_ == PotentialKind::GAUSSIAN_DECAY ||
         (kind_ == PotentialKind::TABLE && table_->tail == Tail::CONSTANT && table_->last_v == 0.0);
}

double Potential::bound() const {
  if (confining()) return std::numeric_limits<double>::infinity();
  if (kind_ == PotentialKind::GAUSSIAN_DECAY) return a_;
  return table_->max_v;
}

std::string Potential::describe() const {
  char buf[128];
  switch (kind_) {
    case PotentialKind::HARMONIC:
      std::snprintf(buf, sizeof buf, "harmonic:%.17g", a_);
      break;
    case PotentialKind::GAUSSIAN_DECAY:
      std::snprintf(buf, sizeof buf, "gaussian:%.17g:%.17g", a_, b_);
      break;
    case PotentialKind::TABLE:
      std::snprintf(buf, sizeof buf, "table:%zu:%s", table_->r.size(),
                    table_->tail == Tail::QUADRATIC ? "quadratic" : "constant");
      break;
  }
  std::string s(buf);
  if (offset_ != 0.0) {
    std::snprintf(buf, sizeof buf, "@%.17g", offset_);
    s += buf;
  }
  return s;
}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::SP:
      return "sp";
    case ModelKind::SP_CONFINED:
      return "sp-confined";
    case ModelKind::NLS:
      return "nls";
    case ModelKind::NLS_DECAYING:
      return "nls-decaying";
  }
  return "?";
}

Model Model::sp() { return Model{ModelKind::SP, 3, std::nullopt, 0.0}; }

Model Model::sp_confined(Potential v) {
  Model m{ModelKind::SP_CONFINED, 3, std::move(v), 0.0};
  m.validate();
  return m;
}

Model Model::nls(int dim) {
  Model m{ModelKind::NLS, dim, std::nullopt, 0.0};
  m.validate();
  return m;
}

Model Model::nls_decaying(int dim, Potential v, double mu) {
  Model m{ModelKind::NLS_DECAYING, dim, std::move(v), mu};
  m.validate();
  return m;
}

double Model::potential_sign() const {
  if (kind == ModelKind::SP_CONFINED) return 1.0;
  if (kind == ModelKind::NLS_DECAYING) return -mu;
  return 0.0;
}

void Model::validate() const {
  if (dim < 1 || dim > 3) throw ConfigError("model dimension must be 1, 2 or 3");
  switch (kind) {
    case ModelKind::SP:
      if (dim != 3) throw ConfigError("SP model requires N = 3");
      break;
    case ModelKind::SP_CONFINED:
      if (dim != 3) throw ConfigError("SP_CONFINED model requires N = 3");
      if (!potential || !potential->confining()) throw ConfigError("SP_CONFINED requires a confining potential");
      break;
    case ModelKind::NLS:
      break;
    case ModelKind::NLS_DECAYING:
      if (!potential || !potential->decaying()) throw ConfigError("NLS_DECAYING requires a decaying potential");
      if (!(mu > 0.0)) throw ConfigError("NLS_DECAYING requires mu > 0");
      break;
  }
}

std::string Model::describe() const {
  std::string s = to_string(kind);
  s += ":N=" + std::to_string(dim);
  if (potential) s += ":V=" + potential->describe();
  if (kind == ModelKind::NLS_DECAYING) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ":mu=%.17g", mu);
    s += buf;
  }
  return s;
}

namespace {

void check_dims(const Model& model, const Field& u) {
  if (u.grid().dim() != model.dim)
    throw ModelError("field has dimension " + std::to_string(u.grid().dim()) + ", model " + model.describe());
}

struct Pieces {
  EnergyBreakdown e;
  std::vector<double> ku;
  std::vector<double> phi;
  std::vector<double> v;
};

Pieces evaluate(const Model& model, const Field& u, bool want_grad) {
  check_dims(model, u);
  const auto& g = u.grid();
  const std::size_t m = u.size();
  const double p = model.exponent();
  Pieces out;
  if (want_grad) {
    out.ku.resize(m);
    g.kinetic().apply(u.values(), out.ku);
  }
  double lp = 0.0;
  for (std::size_t i = 0; i < m; ++i) lp += g.weight(i) * std::pow(std::abs(u[i]), p);
  auto& e = out.e;
  e.A = 0.5 * dirichlet_integral(u);
  e.C = model.dim / (2.0 * model.dim + 4.0) * lp;
  if (model.has_hartree()) {
    auto cs = coulomb_potential(u);
    e.B = cs.energy_B;
    if (want_grad) out.phi.assign(cs.phi.values().begin(), cs.phi.values().end());
  }
  if (model.has_potential()) {
    out.v = model.potential->sample(g);
    double d = 0.0;
    for (std::size_t i = 0; i < m; ++i) d += g.weight(i) * out.v[i] * u[i] * u[i];
    e.D_raw = 0.5 * d;
    e.D = model.potential_sign() * e.D_raw;
  }
  e.total = e.A + e.B - e.C + e.D;
  if (!std::isfinite(e.total)) throw NumericalError("non-finite energy");
  return out;
}

Field assemble_gradient(const Model& model, const Field& u, const Pieces& pc) {
  const auto& g = u.grid();
  const std::size_t m = u.size();
  const double q = model.exponent() - 2.0;
  const double s = model.potential_sign();
  std::vector<double> grad(m);
  for (std::size_t i = 0; i < m; ++i) {
    double gi = pc.ku[i] / g.weight(i);
    const double a = std::abs(u[i]);
    if (a > 0.0) gi -= std::pow(a, q) * u[i];
    if (!pc.phi.empty()) gi += pc.phi[i] * u[i];
    if (!pc.v.empty()) gi += s * pc.v[i] * u[i];
    grad[i] = gi;
  }
  return Field(u.grid_ptr(), std::move(grad));
}

}  // namespace

EnergyBreakdown energy(const Model& model, const Field& u) { return evaluate(model, u, false).e; }

Field gradient(const Model& model, const Field& u) {
  auto pc = evaluate(model, u, true);
  return assemble_gradient(model, u, pc);
}

std::pair<EnergyBreakdown, Field> energy_and_gradient(const Model& model, const Field& u) {
  auto pc = evaluate(model, u, true);
  return {pc.e, assemble_gradient(model, u, pc)};
}

double lp_integral(const Field& u, double p) {
  const auto& g = u.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += g.weight(i) * std::pow(std::abs(u[i]), p);
  return s;
}

double gn_gap(const Field& u, double cstar) {
  const double c = u.mass();
  if (!(c > 0.0)) throw DomainError("GN gap of a zero field");
  if (!(cstar > 0.0)) throw DomainError("GN gap needs c* > 0");
  const int n = u.grid().dim();
  const double k = dirichlet_integral(u);
  return (n + 2.0) / (n * std::pow(cstar, 2.0 / n)) * k * std::pow(c, 2.0 / n) - lp_integral(u, 2.0 + 4.0 / n);
}

double pohozaev_residual(const Model& model, const Field& u, double lambda) {
  const auto e = energy(model, u);
  const double c = u.mass();
  const int n = model.dim;
  double vr = 0.0, rv = 0.0;  // int V u^2, int r V' u^2
  if (model.has_potential()) {
    const auto& g = u.grid();
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = g.node(i);
      vr += g.weight(i) * (*model.potential)(r) * u[i] * u[i];
      rv += g.weight(i) * r * model.potential->derivative(r) * u[i] * u[i];
    }
  }
  if (model.has_hartree()) {
    double res = e.A + 5.0 * e.B - 3.0 * e.C - 1.5 * lambda * c;
    if (model.has_potential()) res += 1.5 * vr + 0.5 * rv;
    return res;
  }
  const double k = 2.0 * e.A;
  const double lp = lp_integral(u, model.exponent());
  double res = 0.5 * (n - 2.0) * k - n * n / (2.0 * n + 4.0) * lp - 0.5 * n * lambda * c;
  if (model.kind == ModelKind::NLS_DECAYING) res -= model.mu * (0.5 * n * vr + 0.5 * rv);
  return res;
}

}  // namespace masslab
