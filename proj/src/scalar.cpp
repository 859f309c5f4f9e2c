#include "ldopt/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ldopt/error.hpp"

namespace ldopt {

double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol,
              int max_iter) {
  return bisect(f, lo, hi, f(lo), f(hi), xtol, max_iter);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double flo,
              double fhi, double xtol, int max_iter) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::isnan(flo) || std::isnan(fhi) || std::signbit(flo) == std::signbit(fhi)) {
    throw NumericalError("bisect: no sign change on [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
  }
  for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

Minimum brent_minimize(const std::function<double(double)>& f, double lo, double hi,
                       double xtol, int max_iter) {
  constexpr double kGolden = 0.3819660112501051;
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  double a = lo, b = hi;
  double x = a + kGolden * (b - a);
  double w = x, v = x;
  double fx = f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;

  for (int it = 0; it < max_iter; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = xtol + 4.0 * kEps * std::abs(x);
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

    bool golden = true;
    if (std::abs(e) > tol1) {
      // Parabola through (v, fv), (w, fw), (x, fx).
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if ((u - a) < tol2 || (b - u) < tol2) d = (x < m) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x >= m) ? a - x : b - x;
      d = kGolden * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);

    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx};
}

Minimum multistart_minimize(const std::function<double(double)>& f, double lo, double hi,
                            int starts, double xtol) {
  starts = std::max(starts, 1);
  const double step = (hi - lo) / starts;
  Minimum best{lo, std::numeric_limits<double>::infinity()};
  for (int k = 0; k < starts; ++k) {
    const double a = lo + k * step;
    const double b = (k + 1 == starts) ? hi : lo + (k + 1) * step;
    const Minimum m = brent_minimize(f, a, b, xtol);
    if (k == 0 || m.fx < best.fx) best = m;
  }
  return best;
}

double richardson_derivative(const std::function<double(double)>& f, double x) {
  const double h = std::max(1e-6, 1e-6 * std::abs(x));
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace ldopt
