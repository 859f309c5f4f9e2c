#pragma once

// Reference computations used by the tests. Each one is written from first
// principles (c.d.f.s, closed forms, brute-force search) and shares no code
// with the library, so agreement is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

namespace oracle {

using Real = long double;

inline Real logistic_cdf(Real c) { return 1.0L / (1.0L + std::exp(-c)); }

inline Real normal_cdf(Real c) { return 0.5L * std::erfc(-c / std::sqrt(2.0L)); }
inline Real normal_pdf(Real c) {
  return std::exp(-0.5L * c * c) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
}

// {P'(c)}^2 / [P(c){1 - P(c)}] with the upper tail passed separately so that
// it keeps full relative precision.
inline Real binary(Real pdf, Real cdf, Real sf) { return pdf * pdf / (cdf * sf); }

/// Base weight Psi(c) for a registered model id, from its defining formula.
inline Real psi(const std::string& id, Real c) {
  if (id == "logistic") return binary(logistic_cdf(c) * logistic_cdf(-c), logistic_cdf(c), logistic_cdf(-c));
  if (id == "probit") return binary(normal_pdf(c), normal_cdf(c), normal_cdf(-c));
  if (id == "double-exponential") {
    const Real a = std::fabs(c), tail = 0.5L * std::exp(-a);
    return binary(tail, 1.0L - tail, tail);
  }
  if (id == "double-reciprocal") {
    const Real a = std::fabs(c), tail = 0.5L / (1.0L + a);
    return binary(0.5L / ((1.0L + a) * (1.0L + a)), 1.0L - tail, tail);
  }
  if (id == "cloglog") {
    // u^2 e^{-2u} / ((1 - e^{-u}) e^{-u}) with the e^{-u} cancelled by hand.
    const Real u = std::exp(c);
    return std::exp(2.0L * c - u) / -std::expm1(-u);
  }
  if (id == "poisson-loglinear") return std::exp(c);
  if (id == "michaelis-menten") return c * c;
  const auto colon = id.find(":m=");
  if (id.rfind("power", 0) == 0 && colon != std::string::npos) {
    return std::pow(c, std::stold(id.substr(colon + 3)));
  }
  const auto rpos = id.find(":r=");
  if (id.rfind("hedayat", 0) == 0 && rpos != std::string::npos) {
    const Real r = std::stold(id.substr(rpos + 3));
    return std::exp(2.0L * r * c) / std::pow(1.0L + std::exp(c), 2.0L * r + 2.0L);
  }
  return NAN;
}

inline Real psi_j(const std::string& id, int j, Real c) {
  const Real b = psi(id, c);
  return j == 1 ? b : j == 2 ? c * b : c * c * b;
}

inline Real bisect(const std::function<Real(Real)>& f, Real lo, Real hi) {
  Real flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15L * (1.0L + std::fabs(lo)); ++i) {
    const Real mid = 0.5L * (lo + hi);
    const Real fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5L * (lo + hi);
}

/// Positive root of Psi + c Psi' = 0 for the logistic weight, where
/// Psi'/Psi = -tanh(c/2); the symmetric two-point D criterion is (c Psi)^2.
inline double logistic_d_optimal_point() {
  return static_cast<double>(bisect([](Real c) { return 1.0L - c * std::tanh(c / 2.0L); }, 1.0L, 2.0L));
}

/// The c in (c1, c2) whose Psi1 equals the omega-mixture of Psi1(c1) and Psi1(c2).
inline double single_point_merge(const std::string& id, double c1, double c2, double omega) {
  const Real target = omega * psi(id, c1) + (1.0L - omega) * psi(id, c2);
  return static_cast<double>(bisect([&](Real c) { return psi(id, c) - target; }, c1, c2));
}

/// Brute-force pair merge. For each c on a grid between c1 and c2 the Psi1
/// moment equation of {(anchor, omega_x), (c, 1 - omega_x)} against
/// {(c1, omega), (c2, 1 - omega)} fixes omega_x; the grid cell where the Psi2
/// residual changes sign is then re-gridded until it is below 1e-15 wide.
inline std::pair<double, double> grid_merge(const std::string& id, double anchor, double c1,
                                            double c2, double omega) {
  const Real m1 = omega * psi_j(id, 1, c1) + (1.0L - omega) * psi_j(id, 1, c2);
  const Real m2 = omega * psi_j(id, 2, c1) + (1.0L - omega) * psi_j(id, 2, c2);
  const Real a1 = psi_j(id, 1, anchor), a2 = psi_j(id, 2, anchor);
  auto share = [&](Real c) { return (m1 - psi_j(id, 1, c)) / (a1 - psi_j(id, 1, c)); };
  auto residual = [&](Real c) {
    const Real w = share(c);
    return w * a2 + (1 - w) * psi_j(id, 2, c) - m2;
  };
  Real lo = std::min(c1, c2), hi = std::max(c1, c2);
  constexpr int n = 400;
  for (int round = 0; round < 40 && hi - lo > 1e-15L * (1.0L + std::fabs(lo)); ++round) {
    const Real step = (hi - lo) / n;
    Real best_lo = lo, best_hi = hi, best = INFINITY;
    Real prev = residual(lo);
    for (int i = 1; i <= n; ++i) {
      const Real x = lo + i * step, r = residual(x);
      const Real w = share(x);
      if ((prev < 0) != (r < 0) && w >= -1e-12L && w <= 1 + 1e-12L) {
        const Real size = std::min(std::fabs(prev), std::fabs(r));
        if (size < best) {
          best = size;
          best_lo = x - step;
          best_hi = x;
        }
      }
      prev = r;
    }
    if (!std::isfinite(static_cast<double>(best))) break;
    lo = best_lo;
    hi = best_hi;
  }
  const Real c = 0.5L * (lo + hi);
  return {static_cast<double>(c), static_cast<double>(share(c))};
}

/// Smallest eigenvalue of the symmetric 2x2 matrix [[a, b], [b, d]] by the
/// quadratic formula in extended precision.
inline double min_eigenvalue(Real a, Real b, Real d) {
  const Real mean = 0.5L * (a + d), rad = std::sqrt(0.25L * (a - d) * (a - d) + b * b);
  return static_cast<double>(mean - rad);
}

}  // namespace oracle
