#include "ldopt/model.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <system_error>

#include "ldopt/error.hpp"

namespace ldopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKinkGuard = 1e-8;

double sigmoid(double c) {
  if (c >= 0.0) return 1.0 / (1.0 + std::exp(-c));
  const double e = std::exp(c);
  return e / (1.0 + e);
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Upper-tail probability Q(x) = 1 - Phi(x).
double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// Mills ratio Q(x)/phi(x) for large positive x, by backward evaluation of
// its continued fraction.
double mills_ratio(double x) {
  double t = x;
  for (int k = 60; k >= 1; --k) t = x + k / t;
  return 1.0 / t;
}

// Normal hazard phi(x)/Q(x).
double normal_hazard(double x) {
  if (x > 8.0) return 1.0 / mills_ratio(x);
  return normal_pdf(x) / normal_sf(x);
}

LogDerivatives logistic_like(double lead, double slope, double c) {
  // log Psi = lead*c - slope*log(1 + e^c), with slope = 2 for the logistic.
  const double s = sigmoid(c);
  const double d1 = -slope * s * (1.0 - s);
  return {lead - slope * s, d1, d1 * (1.0 - 2.0 * s)};
}

// Derivatives of f(u) = u / (1 - e^{-u}) for u > 0.
struct CLogLogF {
  double f, f1, f2;
};

CLogLogF cloglog_f(double u) {
  if (u < 1e-2) {
    const double u2 = u * u;
    return {1.0 + u / 2.0 + u2 / 12.0 - u2 * u2 / 720.0, 0.5 + u / 6.0 - u2 * u / 180.0,
            1.0 / 6.0 - u2 / 60.0};
  }
  const double s = std::exp(-u);
  const double d = -std::expm1(-u);
  const double n = d - u * s;
  return {u / d, n / (d * d), (u * s * d - 2.0 * n * s) / (d * d * d)};
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, std::string_view id) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw DomainError("malformed model parameter in '" + std::string(id) + "'");
  }
  return v;
}

}  // namespace

CdfEvaluator logistic_cdf() {
  return {[](double c) { return sigmoid(c); }, [](double c) { return sigmoid(-c); },
          [](double c) {
            const double s = sigmoid(c);
            return s * (1.0 - s);
          }};
}

CdfEvaluator probit_cdf() {
  return {[](double c) { return normal_sf(-c); }, [](double c) { return normal_sf(c); },
          [](double c) { return normal_pdf(c); }};
}

CdfEvaluator laplace_cdf() {
  return {[](double c) { return c >= 0.0 ? 1.0 - 0.5 * std::exp(-c) : 0.5 * std::exp(c); },
          [](double c) { return c >= 0.0 ? 0.5 * std::exp(-c) : 1.0 - 0.5 * std::exp(c); },
          [](double c) { return 0.5 * std::exp(-std::abs(c)); }};
}

CdfEvaluator double_reciprocal_cdf() {
  return {[](double c) { return c >= 0.0 ? 1.0 - 0.5 / (1.0 + c) : 0.5 / (1.0 - c); },
          [](double c) { return c >= 0.0 ? 0.5 / (1.0 + c) : 1.0 - 0.5 / (1.0 - c); },
          [](double c) {
            const double t = 1.0 + std::abs(c);
            return 0.5 / (t * t);
          }};
}

CdfEvaluator cloglog_cdf() {
  return {[](double c) { return -std::expm1(-std::exp(c)); },
          [](double c) { return std::exp(-std::exp(c)); },
          [](double c) { return std::exp(c - std::exp(c)); }};
}

double binary_weight(const CdfEvaluator& P, double c) {
  const double p = P.cdf(c);
  const double q = P.sf(c);
  if (!(p > 0.0) || !(q > 0.0)) {
    throw DomainError("c.d.f. saturates at c = " + shortest(c));
  }
  const double d = P.pdf(c);
  return (d / p) * (d / q);
}

Model Model::logistic() { return {ModelKind::Logistic, 0.0}; }
Model Model::probit() { return {ModelKind::Probit, 0.0}; }
Model Model::double_exponential() { return {ModelKind::DoubleExponential, 0.0}; }
Model Model::double_reciprocal() { return {ModelKind::DoubleReciprocal, 0.0}; }
Model Model::cloglog() { return {ModelKind::CLogLog, 0.0}; }
Model Model::poisson_loglinear() { return {ModelKind::PoissonLoglinear, 0.0}; }
Model Model::michaelis_menten() { return {ModelKind::MichaelisMenten, 0.0}; }

Model Model::power(double m) {
  if (!std::isfinite(m)) throw DomainError("power model exponent must be finite");
  return {ModelKind::Power, m};
}

Model Model::hedayat(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("hedayat model requires r > 0");
  return {ModelKind::Hedayat, r};
}

Model Model::parse(std::string_view id) {
  if (id == "logistic") return logistic();
  if (id == "probit") return probit();
  if (id == "double-exponential") return double_exponential();
  if (id == "double-reciprocal") return double_reciprocal();
  if (id == "cloglog") return cloglog();
  if (id == "poisson-loglinear") return poisson_loglinear();
  if (id == "michaelis-menten") return michaelis_menten();
  constexpr std::string_view kPower = "power:m=";
  constexpr std::string_view kHedayat = "hedayat:r=";
  if (id.starts_with(kPower)) return power(parse_number(id.substr(kPower.size()), id));
  if (id.starts_with(kHedayat)) return hedayat(parse_number(id.substr(kHedayat.size()), id));
  throw DomainError("unknown model '" + std::string(id) + "'");
}

std::string Model::id() const {
  switch (kind_) {
    case ModelKind::Logistic: return "logistic";
    case ModelKind::Probit: return "probit";
    case ModelKind::DoubleExponential: return "double-exponential";
    case ModelKind::DoubleReciprocal: return "double-reciprocal";
    case ModelKind::CLogLog: return "cloglog";
    case ModelKind::PoissonLoglinear: return "poisson-loglinear";
    case ModelKind::MichaelisMenten: return "michaelis-menten";
    case ModelKind::Power: return "power:m=" + shortest(param_);
    case ModelKind::Hedayat: return "hedayat:r=" + shortest(param_);
  }
  return {};
}

bool Model::parity() const {
  switch (kind_) {
    case ModelKind::Logistic:
    case ModelKind::Probit:
    case ModelKind::DoubleExponential:
    case ModelKind::DoubleReciprocal: return true;
    case ModelKind::Hedayat: return param_ == 1.0;
    default: return false;
  }
}

bool Model::degenerate() const {
  return kind_ == ModelKind::Power && (param_ == 0.0 || param_ == -1.0 || param_ == -2.0);
}

bool Model::binary() const {
  switch (kind_) {
    case ModelKind::Logistic:
    case ModelKind::Probit:
    case ModelKind::DoubleExponential:
    case ModelKind::DoubleReciprocal:
    case ModelKind::CLogLog: return true;
    default: return false;
  }
}

bool Model::kinked() const {
  return kind_ == ModelKind::DoubleExponential || kind_ == ModelKind::DoubleReciprocal;
}

LinkKind Model::link() const {
  return kind_ == ModelKind::MichaelisMenten ? LinkKind::Saturating : LinkKind::Affine;
}

Interval Model::natural_domain() const {
  if (kind_ == ModelKind::Power || kind_ == ModelKind::MichaelisMenten) return {0.0, kInf};
  return {-kInf, kInf};
}

void Model::check_domain(double c) const {
  if (std::isnan(c)) throw DomainError("c is NaN");
  if ((kind_ == ModelKind::Power || kind_ == ModelKind::MichaelisMenten) && !(c > 0.0)) {
    throw DomainError(id() + " is defined for c > 0 only, got c = " + shortest(c));
  }
}

double Model::base(double c) const {
  check_domain(c);
  switch (kind_) {
    case ModelKind::Logistic: {
      const double e = std::exp(-std::abs(c));
      return e / ((1.0 + e) * (1.0 + e));
    }
    case ModelKind::Probit: {
      if (std::abs(c) > 8.0) {
        const double a = std::abs(c);
        return normal_hazard(a) * normal_pdf(a) / (1.0 - normal_sf(a));
      }
      return binary_weight(probit_cdf(), c);
    }
    case ModelKind::DoubleExponential: {
      const double a = std::abs(c);
      // 1 / (2 e^a - 1), written to stay finite for large a.
      const double e = std::exp(-a);
      return e / (2.0 - e);
    }
    case ModelKind::DoubleReciprocal: {
      const double a = std::abs(c);
      return 1.0 / ((1.0 + a) * (1.0 + a) * (1.0 + 2.0 * a));
    }
    case ModelKind::CLogLog: {
      const double u = std::exp(c);
      if (u == 0.0) return 0.0;
      // log expm1(u) without overflow for large u.
      const double log_em1 = u > 30.0 ? u + std::log1p(-std::exp(-u)) : std::log(std::expm1(u));
      return std::exp(2.0 * c - log_em1);
    }
    case ModelKind::PoissonLoglinear: return std::exp(c);
    case ModelKind::MichaelisMenten: return c * c;
    case ModelKind::Power: return std::pow(c, param_);
    case ModelKind::Hedayat: {
      // e^{2rc} / (1 + e^c)^{2r+2} in log space.
      const double r = param_;
      const double softplus = c > 0.0 ? c + std::log1p(std::exp(-c)) : std::log1p(std::exp(c));
      return std::exp(2.0 * r * c - (2.0 * r + 2.0) * softplus);
    }
  }
  return 0.0;
}

double Model::psi(int j, double c) const {
  const double b = base(c);
  switch (j) {
    case 1: return b;
    case 2: return c * b;
    case 3: return c * c * b;
    default: throw PreconditionError("psi index must be 1, 2 or 3");
  }
}

LogDerivatives Model::log_derivatives(double c) const {
  check_domain(c);
  if (kinked() && std::abs(c) < kKinkGuard) {
    throw DomainError(id() + " is not differentiable at c = 0");
  }
  switch (kind_) {
    case ModelKind::Logistic: return logistic_like(1.0, 2.0, c);
    case ModelKind::Hedayat: return logistic_like(2.0 * param_, 2.0 * param_ + 2.0, c);
    case ModelKind::Probit: {
      const double lp = normal_hazard(c), lm = normal_hazard(-c);
      const double dp = lp * (lp - c), dm = lm * (lm + c);
      const double ddp = dp * (lp - c) + lp * (dp - 1.0);
      const double ddm = dm * (lm + c) + lm * (dm - 1.0);
      return {-2.0 * c + lp - lm, -2.0 + dp + dm, ddp - ddm};
    }
    case ModelKind::DoubleExponential: {
      const double a = std::abs(c), s = c > 0.0 ? 1.0 : -1.0;
      const double e = std::exp(-a);
      const double p = e / (2.0 - e);
      return {-s * (1.0 + p), p * (1.0 + p), -s * (1.0 + 2.0 * p) * p * (1.0 + p)};
    }
    case ModelKind::DoubleReciprocal: {
      const double a = std::abs(c), s = c > 0.0 ? 1.0 : -1.0;
      const double u = 1.0 + a, v = 1.0 + 2.0 * a;
      return {-s * (2.0 / u + 2.0 / v), 2.0 / (u * u) + 4.0 / (v * v),
              -s * (4.0 / (u * u * u) + 16.0 / (v * v * v))};
    }
    case ModelKind::CLogLog: {
      const double u = std::exp(c);
      const CLogLogF f = cloglog_f(u);
      const double l1 = -u * f.f1;
      return {2.0 - f.f, l1, l1 - u * u * f.f2};
    }
    case ModelKind::PoissonLoglinear: return {1.0, 0.0, 0.0};
    case ModelKind::MichaelisMenten:
    case ModelKind::Power: {
      const double m = kind_ == ModelKind::Power ? param_ : 2.0;
      return {m / c, -m / (c * c), 2.0 * m / (c * c * c)};
    }
  }
  return {};
}

double Model::dpsi(int j, double c) const {
  const double p = base(c);
  const double l = log_derivatives(c).first;
  switch (j) {
    case 1: return p * l;
    case 2: return p * (1.0 + c * l);
    case 3: return p * c * (2.0 + c * l);
    default: throw PreconditionError("psi index must be 1, 2 or 3");
  }
}

double Model::d2psi(int j, double c) const {
  const double p = base(c);
  const LogDerivatives ld = log_derivatives(c);
  const double d1 = p * ld.first;
  const double d2 = p * (ld.second + ld.first * ld.first);
  switch (j) {
    case 1: return d2;
    case 2: return 2.0 * d1 + c * d2;
    case 3: return 2.0 * p + 4.0 * c * d1 + c * c * d2;
    default: throw PreconditionError("psi index must be 1, 2 or 3");
  }
}

ConditionFactors Model::factors(double c) const {
  const LogDerivatives ld = log_derivatives(c);
  const double l = ld.first, l1 = ld.second, l2 = ld.third;
  const double q = l1 / (l * l);
  const double g1 = 1.0 - q;
  const double k = l - l1 / l;
  const double k1 = l1 - l2 / l + (l1 / l) * (l1 / l);
  const double kr = k1 / (k * k);

  ConditionFactors f;
  f.psi1_slope = l;
  f.ratio12_slope = g1;
  f.ratio12_scale = std::abs(q);
  f.ratio_ratio_slope = 2.0 - 2.0 * kr;
  f.ratio_ratio_scale = 2.0 * std::abs(kr);
  f.ratio13_slope = 2.0 * c * g1 + 2.0 / l;
  f.ratio13_scale = std::abs(2.0 * c * g1) + std::abs(2.0 / l);
  return f;
}

double Model::x_to_c(double alpha, double beta, double x) const {
  if (link() == LinkKind::Affine) return alpha + beta * x;
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw PreconditionError("saturating link requires alpha > 0 and beta > 0");
  }
  if (!(x > 0.0)) throw DomainError("saturating link requires x > 0");
  return alpha * x / (beta + x);
}

double Model::c_to_x(double alpha, double beta, double c) const {
  if (link() == LinkKind::Affine) {
    if (beta == 0.0) throw PreconditionError("affine link requires beta != 0");
    return (c - alpha) / beta;
  }
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw PreconditionError("saturating link requires alpha > 0 and beta > 0");
  }
  if (!(c > 0.0) || !(c < alpha)) {
    throw DomainError("saturating link maps onto (0, alpha), got c = " + shortest(c));
  }
  return beta * c / (alpha - c);
}

Mat2 Model::a_matrix(double alpha, double beta) const {
  if (link() == LinkKind::Affine) {
    if (beta == 0.0) throw PreconditionError("A matrix is singular for beta = 0");
    return {1.0, -alpha / beta, 0.0, 1.0 / beta};
  }
  if (alpha == 0.0 || beta == 0.0) {
    throw PreconditionError("A matrix is singular for alpha = 0 or beta = 0");
  }
  return {1.0 / alpha, -1.0 / beta, 0.0, 1.0 / (alpha * beta)};
}

double eval_psi(const Model& model, int j, double c) { return model.psi(j, c); }

double Triple::ratio12(double c) const {
  const double x = reflected_ ? -c : c;
  return x + 1.0 / model_.log_derivatives(x).first;
}

ConditionFactors Triple::factors(double c) const {
  if (!reflected_) return model_.factors(c);
  ConditionFactors f = model_.factors(-c);
  f.psi1_slope = -f.psi1_slope;
  f.ratio12_slope = -f.ratio12_slope;
  f.ratio_ratio_slope = -f.ratio_ratio_slope;
  f.ratio13_slope = -f.ratio13_slope;
  return f;
}

}  // namespace ldopt
