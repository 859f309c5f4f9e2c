#include "ldopt/classifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "ldopt/error.hpp"
#include "ldopt/scalar.hpp"

namespace ldopt {

namespace {

constexpr double kSignTol = 1e-11;
constexpr double kKinkRadius = 1e-8;
constexpr double kCapDecay = 1e-12;
constexpr double kCapMax = 30.0;
constexpr int kDisagree = 2;

int sign_of(double v, double scale) {
  if (!(std::abs(v) > kSignTol * (1.0 + scale))) return 0;
  return v > 0.0 ? 1 : -1;
}

bool in_kink(const Model& m, double c) { return m.kinked() && std::abs(c) < kKinkRadius; }

// The four signs at c, in the order psi1', ratio12', ratio-of-ratios', ratio13'.
std::array<int, 4> signs_at(const Triple& t, double c) {
  if (in_kink(t.model(), c)) return {0, 0, 0, 0};
  const ConditionFactors f = t.factors(c);
  return {sign_of(f.psi1_slope, 0.0), sign_of(f.ratio12_slope, f.ratio12_scale),
          sign_of(f.ratio_ratio_slope, f.ratio_ratio_scale),
          sign_of(f.ratio13_slope, f.ratio13_scale)};
}

// Resolves an inconclusive sign at c by looking at both neighbours at a
// shrinking offset. Returns the common sign, kDisagree when the two sides
// differ, or 0 if nothing could be decided.
int resolve(const Triple& t, int idx, double c, const Interval& in) {
  double delta = 1e-3 * in.width();
  for (int i = 0; i < 40; ++i, delta *= 0.5) {
    const double a = c - delta, b = c + delta;
    const bool has_a = a > in.lo, has_b = b < in.hi;
    const int sa = has_a ? signs_at(t, a)[idx] : 0;
    const int sb = has_b ? signs_at(t, b)[idx] : 0;
    if (has_a && has_b) {
      if (sa != 0 && sb != 0) return sa == sb ? sa : kDisagree;
    } else if (has_a && sa != 0) {
      return sa;
    } else if (has_b && sb != 0) {
      return sb;
    }
  }
  return 0;
}

std::vector<double> interior_grid(const Model& m, const Interval& in, int n, bool cluster_lo,
                                  bool cluster_hi) {
  const double w = in.width();
  const int clusters = int(cluster_lo) + int(cluster_hi);
  const int n_geo = clusters == 0 ? 0 : n / 2;
  const int n_uni = n - n_geo;
  std::vector<double> pts;
  pts.reserve(n);
  for (int i = 0; i < n_uni; ++i) pts.push_back(in.lo + w * (i + 1) / (n_uni + 1));
  if (clusters > 0) {
    const int per = std::max(2, n_geo / clusters);
    const double lmin = std::log(1e-6), lmax = std::log(0.5);
    for (int k = 0; k < per; ++k) {
      const double off = w * std::exp(lmin + (lmax - lmin) * k / (per - 1));
      if (cluster_lo) pts.push_back(in.lo + off);
      if (cluster_hi) pts.push_back(in.hi - off);
    }
  }
  std::erase_if(pts, [&](double c) { return !(c > in.lo && c < in.hi) || in_kink(m, c); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Numeric surrogate for lim_{c -> end} (Psi2'/Psi1')(c) (Psi1(end) - Psi1(c)) = 0,
// approaching from inside the interval (dir = +1 from the lower end).
bool limit_condition(const Triple& t, double end, int dir, double width, std::string& why) {
  try {
    const double span = std::min(1.0, width);
    const double p_end = t.value(1, end);
    std::vector<double> v;
    double first_delta = 0.0;
    for (int k = 2; k <= 7; ++k) {
      const double delta = std::pow(10.0, -k) * span;
      const double c = end + dir * delta;
      if (in_kink(t.model(), c)) continue;
      if (v.empty()) first_delta = delta;
      v.push_back(std::abs(t.ratio12(c) * (p_end - t.value(1, c))));
    }
    if (v.size() < 2) {
      why = "limit condition could not be sampled";
      return false;
    }
    // Envelope of the tail, max over the offsets not larger than the current
    // one. A passing zero of Psi2'/Psi1' can make single values dip, so
    // decay is judged on the envelope rather than term by term.
    std::vector<double> env(v.size());
    double run = 0.0;
    for (std::size_t i = v.size(); i-- > 0;) env[i] = run = std::max(run, v[i]);
    if (!(env.back() <= 1e-3 * env.front()) && env.front() > 0.0) {
      why = "limit condition sequence does not decay";
      return false;
    }
    const double slope = env.front() / first_delta;
    if (!(v.back() < 1e-6 * (1.0 + slope))) {
      why = "limit condition does not vanish at the finite end";
      return false;
    }
    return true;
  } catch (const DomainError& e) {
    why = std::string("limit condition undefined: ") + e.what();
    return false;
  }
}

double cap_end(const Triple& t, double start, int dir) {
  const double step = 0.05;
  const double limit = dir > 0 ? std::max(kCapMax, start + 1.0) : std::min(-kCapMax, start - 1.0);
  double peak = 0.0;
  for (double c = start;; c += dir * step) {
    if ((dir > 0 && c >= limit) || (dir < 0 && c <= limit)) return limit;
    double p = 0.0;
    try {
      p = t.value(1, c);
    } catch (const DomainError&) {
      continue;
    }
    peak = std::max(peak, p);
    if (peak > 0.0 && p < kCapDecay * peak) return c;
  }
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::TypeI: return "TypeI";
    case Verdict::TypeII: return "TypeII";
    case Verdict::Neither: return "Neither";
  }
  return "";
}

const char* to_string(BreakpointKind k) {
  return k == BreakpointKind::Psi1PrimeZero ? "psi1_prime_zero" : "ratio_condition_zero";
}

Interval cap_interval(const Triple& t, Interval in) {
  if (std::isnan(in.lo) || std::isnan(in.hi)) throw PreconditionError("interval end is NaN");
  if (std::isinf(in.lo) && std::isinf(in.hi)) {
    // Cap each side separately, scanning outward from the origin.
    return {cap_end(t, 0.0, -1), cap_end(t, 0.0, +1)};
  }
  if (std::isinf(in.hi)) in.hi = cap_end(t, in.lo, +1);
  if (std::isinf(in.lo)) in.lo = cap_end(t, in.hi, -1);
  return in;
}

Interval cap_interval(const Model& m, Interval in) { return cap_interval(Triple(m), in); }

Classification check_type(const Triple& t, Interval interval, int grid_n) {
  if (grid_n < 64) throw PreconditionError("grid_n must be at least 64");
  if (!(interval.lo < interval.hi)) throw PreconditionError("interval must have lo < hi");
  const Interval dom = t.model().natural_domain();
  const Interval nat = t.is_reflected() ? Interval{-dom.hi, -dom.lo} : dom;
  if (interval.lo < nat.lo || interval.hi > nat.hi) {
    throw DomainError("interval lies outside the natural domain of " + t.model().id());
  }

  Classification out;
  out.interval = interval;
  out.tested = cap_interval(t, interval);
  const auto grid = interior_grid(t.model(), out.tested, grid_n, std::isfinite(interval.lo),
                                  std::isfinite(interval.hi));

  std::array<int, 3> ref{0, 0, 0};
  bool cond41 = true;
  for (double c : grid) {
    auto s = signs_at(t, c);
    for (int k = 0; k < 4; ++k) {
      if (s[k] == 0) s[k] = resolve(t, k, c, out.tested);
    }
    out.diagnostics.push_back({c, s[0], s[1], s[2]});
    if (s[3] != 1) cond41 = false;
    if (out.first_violation) continue;
    for (int k = 0; k < 3; ++k) {
      if (s[k] == 0 || s[k] == kDisagree) {
        out.first_violation = c;
        out.reason = "sign is not constant near c";
        break;
      }
      if (ref[k] == 0) ref[k] = s[k];
      if (s[k] != ref[k]) {
        out.first_violation = c;
        out.reason = "sign change in a tested expression";
        break;
      }
    }
  }
  out.condition_41 = cond41 && !grid.empty();
  if (grid.empty()) {
    out.reason = "no admissible grid points";
    return out;
  }
  if (out.first_violation) return out;

  const int product = ref[0] * ref[1] * ref[2];
  if (product < 0) {
    if (!std::isfinite(interval.lo)) {
      out.reason = "type I sign pattern needs a finite lower end";
      return out;
    }
    if (limit_condition(t, interval.lo, +1, out.tested.width(), out.reason)) {
      out.verdict = Verdict::TypeI;
    }
  } else {
    if (!std::isfinite(interval.hi)) {
      out.reason = "type II sign pattern needs a finite upper end";
      return out;
    }
    if (limit_condition(t, interval.hi, -1, out.tested.width(), out.reason)) {
      out.verdict = Verdict::TypeII;
    }
  }
  return out;
}

Classification check_type(const Model& m, Interval interval, int grid_n) {
  return check_type(Triple(m), interval, grid_n);
}

std::vector<Breakpoint> find_breakpoints(const Model& m, Interval search, int scan_n) {
  if (!search.finite() || !(search.lo < search.hi)) {
    throw PreconditionError("breakpoint search needs a finite interval with lo < hi");
  }
  scan_n = std::max(scan_n, 16);

  struct Sample {
    double c;
    std::array<double, 3> f;
  };
  auto factor = [&](int k, double c) {
    const ConditionFactors f = m.factors(c);
    return k == 0 ? f.psi1_slope : k == 1 ? f.ratio12_slope : f.ratio_ratio_slope;
  };

  std::vector<Sample> samples;
  for (int i = 0; i <= scan_n; ++i) {
    const double c = search.lo + search.width() * i / scan_n;
    if (in_kink(m, c)) continue;
    try {
      const ConditionFactors f = m.factors(c);
      samples.push_back({c, {f.psi1_slope, f.ratio12_slope, f.ratio_ratio_slope}});
    } catch (const DomainError&) {
    }
  }

  std::vector<Breakpoint> psi1, ratio;
  auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      auto& out = k == 0 ? psi1 : ratio;
      const auto kind = k == 0 ? BreakpointKind::Psi1PrimeZero : BreakpointKind::RatioConditionZero;
      const double fa = samples[i].f[k];
      if (std::isnan(fa)) continue;
      if (fa == 0.0) {
        out.push_back({samples[i].c, kind});
        continue;
      }
      if (i + 1 == samples.size()) continue;
      const double fb = samples[i + 1].f[k];
      if (std::isnan(fb) || fb == 0.0 || sgn(fa) == sgn(fb)) continue;
      const double a = samples[i].c, b = samples[i + 1].c;
      if (m.kinked() && a < kKinkRadius && b > -kKinkRadius) {
        out.push_back({0.0, kind});
        continue;
      }
      const double root = bisect([&](double c) { return factor(k, c); }, a, b, fa, fb, 1e-12, 200);
      if (k > 0) {
        const double fr = factor(k, root);
        if (!(std::abs(fr) <= 1e3 * std::max(std::abs(fa), std::abs(fb)))) continue;
      }
      out.push_back({root, kind});
    }
  }

  std::vector<Breakpoint> all = psi1;
  for (const auto& r : ratio) {
    const bool near_psi1 = std::any_of(psi1.begin(), psi1.end(), [&](const Breakpoint& p) {
      return std::abs(p.c - r.c) < 1e-6;
    });
    if (!near_psi1) all.push_back(r);
  }
  std::sort(all.begin(), all.end(), [](const Breakpoint& x, const Breakpoint& y) {
    return x.c < y.c;
  });
  all.erase(std::unique(all.begin(), all.end(),
                        [](const Breakpoint& x, const Breakpoint& y) {
                          return std::abs(x.c - y.c) < 1e-9 && x.kind == y.kind;
                        }),
            all.end());
  return all;
}

bool check_condition_41(const Model& m, Interval interval, int grid_n) {
  if (m.parity() && interval.lo < 0.0) {
    throw PreconditionError("the Psi3'/Psi1' slope condition is checked on c > 0 for even models");
  }
  if (!(interval.lo < interval.hi)) throw PreconditionError("interval must have lo < hi");
  const Triple t(m);
  const Interval tested = cap_interval(t, interval);
  const auto grid = interior_grid(m, tested, std::max(grid_n, 64), std::isfinite(interval.lo),
                                  std::isfinite(interval.hi));
  // For even models the expression vanishes at the origin as the difference
  // of two terms of order 1/c, so its sign cannot be read off very close to 0.
  const double guard = m.parity() ? std::min(1e-3, 0.25 * tested.width()) : 0.0;
  for (double c : grid) {
    if (std::abs(c) < guard) continue;
    int s = signs_at(t, c)[3];
    if (s == 0) s = resolve(t, 3, c, tested);
    if (s != 1) return false;
  }
  return !grid.empty();
}

}  // namespace ldopt
