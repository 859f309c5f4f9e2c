#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "ldopt/design.hpp"
#include "ldopt/linalg.hpp"
#include "ldopt/model.hpp"

namespace ldopt {

/// Symmetric 2x2 information matrix [[m11, m12], [m12, m22]].
struct InfoMatrix {
  double m11 = 0.0;
  double m12 = 0.0;
  double m22 = 0.0;

  double trace() const { return m11 + m22; }
  double det() const { return m11 * m22 - m12 * m12; }
  /// (smaller, larger) eigenvalue.
  std::pair<double, double> eigenvalues() const { return sym_eigenvalues(m11, m12, m22); }
  Mat2 as_mat() const { return {m11, m12, m12, m22}; }
  /// Symmetric part of a general matrix.
  static InfoMatrix from(const Mat2& m) { return {m.a11, 0.5 * (m.a12 + m.a21), m.a22}; }

  friend InfoMatrix operator+(const InfoMatrix& a, const InfoMatrix& b) {
    return {a.m11 + b.m11, a.m12 + b.m12, a.m22 + b.m22};
  }
  friend InfoMatrix operator-(const InfoMatrix& a, const InfoMatrix& b) {
    return {a.m11 - b.m11, a.m12 - b.m12, a.m22 - b.m22};
  }
  friend InfoMatrix operator*(double s, const InfoMatrix& a) {
    return {s * a.m11, s * a.m12, s * a.m22};
  }
};

/// Sum of w_i (Psi1, Psi2, Psi3)(c_i); weights need not sum to one.
InfoMatrix c_matrix(std::span<const SupportPoint> points, const Model& model);
InfoMatrix c_matrix(const Design& design, const Model& model);

/// T^T M T.
InfoMatrix congruence(const InfoMatrix& m, const Mat2& t);

enum class ReparamKind { Identity, MuBeta, Scaled };

/// Reparameterisation tau = tau(alpha, beta); B is its Jacobian.
///  - Identity: tau = (alpha, beta)
///  - MuBeta:   tau = (alpha / beta, beta)
///  - Scaled:   tau = (sqrt(lambda) alpha / beta, sqrt(1 - lambda) beta), 0 < lambda < 1
struct ParamTransform {
  ReparamKind kind = ReparamKind::Identity;
  double lambda = 0.0;

  static ParamTransform parse(std::string_view text);
  std::string name() const;
  Mat2 b_matrix(double alpha, double beta) const;

  friend bool operator==(const ParamTransform&, const ParamTransform&) = default;
};

/// A^T C A, then conjugated by B^{-1} when a transform is given.
InfoMatrix transform_info(const InfoMatrix& c, const Model& model, double alpha, double beta,
                          const std::optional<ParamTransform>& transform);

InfoMatrix info_matrix(const Design& design, const Model& model, double alpha, double beta,
                       const std::optional<ParamTransform>& transform = std::nullopt);

enum class Loewner { Dominates, DominatedBy, Equal, Incomparable };

const char* to_string(Loewner v);

inline constexpr double kLoewnerTol = 1e-8;

Loewner loewner_compare(const InfoMatrix& m1, const InfoMatrix& m2, double tol = kLoewnerTol);

}  // namespace ldopt
