#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "ldopt/linalg.hpp"

namespace ldopt {

enum class ModelKind {
  Logistic,
  Probit,
  DoubleExponential,
  DoubleReciprocal,
  CLogLog,
  PoissonLoglinear,
  MichaelisMenten,
  Power,
  Hedayat,
};

/// How the design variable x maps to the canonical variable c.
enum class LinkKind {
  Affine,      ///< c = alpha + beta x
  Saturating,  ///< c = alpha x / (beta + x)
};

/// A c.d.f. P for a binary-response model, with the upper tail evaluated
/// directly so that 1 - P does not cancel.
struct CdfEvaluator {
  std::function<double(double)> cdf;
  std::function<double(double)> sf;
  std::function<double(double)> pdf;
};

CdfEvaluator logistic_cdf();
CdfEvaluator probit_cdf();
CdfEvaluator laplace_cdf();
CdfEvaluator double_reciprocal_cdf();
CdfEvaluator cloglog_cdf();

/// Information weight {P'(c)}^2 / [P(c){1 - P(c)}] of a binary-response
/// model. Throws DomainError when P(c) rounds to 0 or 1.
double binary_weight(const CdfEvaluator& P, double c);

/// First three derivatives of log Psi at c.
struct LogDerivatives {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;
};

/// The scale-free expressions whose signs define type I / type II
/// triples, each paired with the magnitude of the largest term it was
/// computed from (used to decide whether the value is "signed").
///
///  - psi1_slope has the sign of Psi1'
///  - ratio12_slope     = (Psi2'/Psi1')'
///  - ratio_ratio_slope = ((Psi3'/Psi1')' / (Psi2'/Psi1')')'
///  - ratio13_slope     = (Psi3'/Psi1')'
struct ConditionFactors {
  double psi1_slope = 0.0;
  double ratio12_slope = 0.0;
  double ratio_ratio_slope = 0.0;
  double ratio13_slope = 0.0;
  double ratio12_scale = 0.0;
  double ratio_ratio_scale = 0.0;
  double ratio13_scale = 0.0;
};

/// A registered two-parameter model: Psi1 = Psi, Psi2 = c Psi, Psi3 = c^2 Psi
/// for a model-specific base weight Psi, plus the link and the A(alpha, beta)
/// factor of the information matrix. Cheap to copy.
class Model {
 public:
  static Model logistic();
  static Model probit();
  static Model double_exponential();
  static Model double_reciprocal();
  static Model cloglog();
  static Model poisson_loglinear();
  static Model michaelis_menten();
  static Model power(double m);
  static Model hedayat(double r);

  /// Parses "logistic", ..., "power:m=<value>", "hedayat:r=<value>".
  static Model parse(std::string_view id);

  std::string id() const;
  ModelKind kind() const { return kind_; }
  double parameter() const { return param_; }

  /// Psi is even in c.
  bool parity() const;
  /// One of Psi1, Psi2, Psi3 is constant (power with m in {0, -1, -2}).
  bool degenerate() const;
  /// Binary-response model with a c.d.f.
  bool binary() const;
  /// Psi has a kink at c = 0 (|c|-based c.d.f.).
  bool kinked() const;
  LinkKind link() const;
  /// Interval of c on which Psi is defined. Open at a finite end.
  Interval natural_domain() const;

  /// Base weight Psi(c) = Psi1(c).
  double base(double c) const;
  double psi(int j, double c) const;
  double dpsi(int j, double c) const;
  double d2psi(int j, double c) const;
  LogDerivatives log_derivatives(double c) const;
  ConditionFactors factors(double c) const;

  double x_to_c(double alpha, double beta, double x) const;
  double c_to_x(double alpha, double beta, double c) const;
  Mat2 a_matrix(double alpha, double beta) const;

  friend bool operator==(const Model&, const Model&) = default;

 private:
  Model(ModelKind kind, double param) : kind_(kind), param_(param) {}
  void check_domain(double c) const;

  ModelKind kind_;
  double param_;
};

/// Psi_j(c) for j in {1, 2, 3}.
double eval_psi(const Model& model, int j, double c);

/// A view of a model's (Psi1, Psi2, Psi3) triple, optionally under the
/// reflection c -> -c that turns a type II triple on [A, B] into a type I
/// triple on [-B, -A].
class Triple {
 public:
  explicit Triple(Model model, bool reflected = false) : model_(model), reflected_(reflected) {}

  Triple reflected() const { return Triple(model_, !reflected_); }
  bool is_reflected() const { return reflected_; }
  const Model& model() const { return model_; }

  double value(int j, double c) const { return model_.psi(j, reflected_ ? -c : c); }
  /// Psi2'(c) / Psi1'(c).
  double ratio12(double c) const;
  ConditionFactors factors(double c) const;

 private:
  Model model_;
  bool reflected_;
};

}  // namespace ldopt
