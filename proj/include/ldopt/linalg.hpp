#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace ldopt {

/// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double c, double tol = 0.0) const { return c >= lo - tol && c <= hi + tol; }
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/// General 2x2 matrix, row major.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  double det() const { return a11 * a22 - a12 * a21; }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }

  Mat2 inverse() const {
    const double d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
};

/// Eigenvalues (smaller, larger) of the symmetric matrix [[a, b], [b, d]]
/// via half-trace +/- sqrt(half-trace^2 - det), arranged to avoid
/// cancellation in the smaller root.
inline std::pair<double, double> sym_eigenvalues(double a, double b, double d) {
  const double mean = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double rad = std::hypot(half_diff, b);
  double lo = mean - rad;
  double hi = mean + rad;
  // lo * hi = det; recompute the root of smaller magnitude from the product.
  const double det = a * d - b * b;
  if (std::abs(hi) >= std::abs(lo) && hi != 0.0) {
    lo = det / hi;
  } else if (lo != 0.0) {
    hi = det / lo;
  }
  if (lo > hi) std::swap(lo, hi);
  return {lo, hi};
}

}  // namespace ldopt
