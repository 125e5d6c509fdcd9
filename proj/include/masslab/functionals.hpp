#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "masslab/grid.hpp"

namespace masslab {

enum class PotentialKind { HARMONIC, GAUSSIAN_DECAY, TABLE };

/// Radial external potential V(r) >= 0.
///
/// HARMONIC is a r^2 (confining). GAUSSIAN_DECAY is V0 exp(-(r/width)^2) (decaying,
/// bounded by V0). TABLE interpolates samples with a cubic spline; beyond the last
/// sample it either stays constant or grows like r^2, which decides whether it
/// counts as confining.
///
/// `shifted(x0)` evaluates V(r + x0): the radial slice through a centre displaced by
/// x0. It is an approximation of the off-centre energy and is flagged as such.
class Potential {
 public:
  enum class Tail { CONSTANT, QUADRATIC };

  static Potential harmonic(double a);
  static Potential gaussian(double v0, double width = 1.0);
  static Potential table(std::vector<double> r, std::vector<double> v, Tail tail = Tail::CONSTANT);

  PotentialKind kind() const { return kind_; }
  double operator()(double r) const;
  /// dV/dr at r.
  double derivative(double r) const;
  std::vector<double> sample(const RadialGrid& grid) const;

  Potential shifted(double x0) const;
  double offset() const { return offset_; }

  bool confining() const;
  bool decaying() const;
  /// sup V over [0, inf); +inf when confining.
  double bound() const;

  std::string describe() const;

 private:
  struct Table;
  Potential(PotentialKind kind, double a, double b);
  double base(double r) const;
  double base_derivative(double r) const;

  PotentialKind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
  double offset_ = 0.0;
  std::shared_ptr<const Table> table_;
};

enum class ModelKind { SP, SP_CONFINED, NLS, NLS_DECAYING };

const char* to_string(ModelKind kind);

/// One of the four constrained functionals.
///
/// SP:           E = A + B - C
/// SP_CONFINED:  I = A + B - C + D_raw
/// NLS:          F = A - C
/// NLS_DECAYING: F_mu = A - C - mu D_raw
///
/// with A = 1/2 int |grad u|^2, B the Hartree term, C = N/(2N+4) int |u|^p,
/// p = 2 + 4/N, and D_raw = 1/2 int V u^2.
struct Model {
  ModelKind kind = ModelKind::NLS;
  int dim = 3;
  std::optional<Potential> potential;
  double mu = 0.0;

  static Model sp();
  static Model sp_confined(Potential v);
  static Model nls(int dim);
  static Model nls_decaying(int dim, Potential v, double mu);

  /// Critical exponent 2 + 4/N.
  double exponent() const { return 2.0 + 4.0 / dim; }
  bool has_hartree() const { return kind == ModelKind::SP || kind == ModelKind::SP_CONFINED; }
  bool has_potential() const { return kind == ModelKind::SP_CONFINED || kind == ModelKind::NLS_DECAYING; }
  /// Coefficient of D_raw in the total: +1, -mu or 0.
  double potential_sign() const;

  /// Throws ConfigError when the invariants of the kind are violated.
  void validate() const;
  std::string describe() const;
};

struct EnergyBreakdown {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  /// Signed potential contribution: D_raw, -mu D_raw or 0.
  double D = 0.0;
  double D_raw = 0.0;
  double total = 0.0;
};

/// Throws ModelError when the field dimension does not match the model.
EnergyBreakdown energy(const Model& model, const Field& u);

/// Gradient of the total under the quadrature inner product:
/// -Delta u + phi_u u - |u|^{4/N} u + s V u with s the potential sign.
Field gradient(const Model& model, const Field& u);

/// Energy and gradient in one pass (shares the Coulomb solve).
std::pair<EnergyBreakdown, Field> energy_and_gradient(const Model& model, const Field& u);

/// int |u|^p.
double lp_integral(const Field& u, double p);

/// (N+2)/(N c*^{2/N}) int|grad u|^2 (int u^2)^{2/N} - int |u|^{2+4/N}.
/// Nonnegative up to quadrature error; zero at dilations and multiples of Q.
/// Throws DomainError on a zero field.
double gn_gap(const Field& u, double cstar);

/// Left minus right of the Pohozaev identity for a constrained critical point
/// with multiplier lambda and mass c = |u|_2^2.
///
/// SP kinds: A + 5B - 3C - 3/2 lambda c, plus 3 D_raw + 1/2 int r V' u^2 when a
/// potential is present.
/// NLS kinds: (N-2)/2 int|grad u|^2 - N^2/(2N+4) int|u|^p - N/2 lambda c, plus
/// -mu (N/2 int V u^2 + 1/2 int r V' u^2) for NLS_DECAYING.
double pohozaev_residual(const Model& model, const Field& u, double lambda);

}  // namespace masslab
