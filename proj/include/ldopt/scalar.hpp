#pragma once

#include <functional>

namespace ldopt {

/// Root of f on [lo, hi] by plain bisection. Requires f(lo) and f(hi) of
/// opposite sign (a zero at either end is returned directly); throws
/// NumericalError otherwise. Stops at bracket width `xtol` or after
/// `max_iter` halvings.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-12, int max_iter = 200);

/// Same, with f(lo) and f(hi) already known.
double bisect(const std::function<double(double)>& f, double lo, double hi, double flo,
              double fhi, double xtol, int max_iter);

struct Minimum {
  double x;
  double fx;
};

/// Brent's derivative-free minimizer on [lo, hi]. Converges when the
/// bracket around the incumbent is below 2 * (xtol + 4 eps |x|).
Minimum brent_minimize(const std::function<double(double)>& f, double lo, double hi,
                       double xtol = 1e-10, int max_iter = 200);

/// Best of `starts` Brent runs on equal sub-intervals of [lo, hi]. Ties
/// go to the lowest sub-interval index.
Minimum multistart_minimize(const std::function<double(double)>& f, double lo, double hi,
                            int starts, double xtol = 1e-10);

/// Central difference with step h = max(1e-6, 1e-6 |x|) refined by one
/// Richardson extrapolation (h and h/2).
double richardson_derivative(const std::function<double(double)>& f, double x);

}  // namespace ldopt
