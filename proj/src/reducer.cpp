#include "ldopt/reducer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ldopt/error.hpp"
#include "ldopt/scalar.hpp"

namespace ldopt {

namespace {

constexpr double kSame = 1e-9;
constexpr double kDrop = 1e-12;
constexpr double kClampTol = 1e-9;
constexpr double kRootTol = 1e-12;
constexpr int kRootIter = 200;

struct Mass {
  double c = 0.0;
  double m = 0.0;
};

double psi(const Model& model, int j, double c) { return model.psi(j, c); }

// Clamps a quantity that theory places in [0, 1].
double unit_fraction(double v, const char* what) {
  if (!(v >= -kClampTol && v <= 1.0 + kClampTol)) {
    throw NumericalError(std::string(what) + " fell outside [0, 1]: " + std::to_string(v));
  }
  return std::clamp(v, 0.0, 1.0);
}

// Root of Psi1(c) = target on [c1, c2], Psi1 being monotone there.
double psi1_inverse(const Triple& t, double c1, double c2, double target) {
  const double f1 = t.value(1, c1) - target;
  const double f2 = t.value(1, c2) - target;
  if (f1 == 0.0) return c1;
  if (f2 == 0.0) return c2;
  return bisect([&](double c) { return t.value(1, c) - target; }, c1, c2, f1, f2, kRootTol,
                kRootIter);
}

// The pair merge for a type I triple anchored at its lower end a.
MergeResult merge_type_one(const Triple& t, double a, double c1, double c2, double w) {
  if (w >= 1.0) return {c1, 0.0, 0.0, 0.0, 0.0};
  if (w <= 0.0) return {c2, 0.0, 0.0, 0.0, 0.0};
  const double t1 = w * t.value(1, c1) + (1.0 - w) * t.value(1, c2);
  const double t2 = w * t.value(2, c1) + (1.0 - w) * t.value(2, c2);
  const double t3 = w * t.value(3, c1) + (1.0 - w) * t.value(3, c2);
  const double pa1 = t.value(1, a), pa2 = t.value(2, a), pa3 = t.value(3, a);

  auto share = [&](double c) { return (t1 - t.value(1, c)) / (pa1 - t.value(1, c)); };
  auto f = [&](double c) {
    const double s = share(c);
    return s * (pa2 - t.value(2, c)) + t.value(2, c) - t2;
  };

  const double lo = psi1_inverse(t, c1, c2, t1);
  const double flo = f(lo), fhi = f(c2);
  double cx;
  if ((flo < 0.0) == (fhi < 0.0) && flo != 0.0 && fhi != 0.0 &&
      c2 - lo <= 1e-6 * (1.0 + std::abs(c2))) {
    // Points this close leave only rounding noise in f; take the better end.
    cx = std::abs(flo) <= std::abs(fhi) ? lo : c2;
  } else {
    cx = bisect(f, lo, c2, flo, fhi, kRootTol, kRootIter);
  }
  const double wx = std::clamp(share(cx), 0.0, 1.0);
  MergeResult r;
  r.c = cx;
  r.anchor_share = wx;
  r.psi1_residual = wx * pa1 + (1.0 - wx) * t.value(1, cx) - t1;
  r.psi2_residual = wx * pa2 + (1.0 - wx) * t.value(2, cx) - t2;
  r.psi3_slack = wx * pa3 + (1.0 - wx) * t.value(3, cx) - t3;
  return r;
}

MergeResult merge_unchecked(const Model& model, double anchor, double c1, double c2, double w,
                            Orientation o) {
  if (o == Orientation::TypeI) return merge_type_one(Triple(model), anchor, c1, c2, w);
  MergeResult r = merge_type_one(Triple(model, true), -anchor, -c2, -c1, 1.0 - w);
  r.c = -r.c;
  return r;
}

MergeResult merge_observed(const Model& model, double anchor, double c1, double c2, double w,
                           Orientation o, const MergeObserver& obs) {
  const MergeResult r = merge_unchecked(model, anchor, c1, c2, w, o);
  if (obs) obs({anchor, c1, c2, w, o, r});
  return r;
}

// Psi1 inverse of the omega-mixture of Psi1(c1) and Psi1(c2).
double single_merge(const Model& model, double c1, double c2, double w) {
  if (w >= 1.0) return c1;
  if (w <= 0.0) return c2;
  const Triple t(model);
  const double c = psi1_inverse(t, c1, c2, w * t.value(1, c1) + (1.0 - w) * t.value(1, c2));
  const double mix3 = w * t.value(3, c1) + (1.0 - w) * t.value(3, c2);
  if (t.value(3, c) < mix3 - 1e-10 * (1.0 + std::abs(mix3))) {
    throw NumericalError("single-point merge lowered the third moment");
  }
  return c;
}

struct Fold {
  double anchor_mass = 0.0;
  Mass point;
};

// Folds all points into one, moving mass onto the anchor, farthest point first.
Fold fold_toward(const Model& model, Orientation o, double anchor, std::vector<Mass> pts,
                 const MergeObserver& obs) {
  Fold out;
  std::erase_if(pts, [&](const Mass& p) {
    if (std::abs(p.c - anchor) > kSame) return false;
    out.anchor_mass += p.m;
    return true;
  });
  if (pts.empty()) return out;
  std::stable_sort(pts.begin(), pts.end(), [&](const Mass& x, const Mass& y) {
    return std::abs(x.c - anchor) > std::abs(y.c - anchor);
  });
  Mass acc = pts.front();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Mass& p = pts[i];
    const double total = p.m + acc.m;
    if (std::abs(p.c - acc.c) <= kRootTol * (1.0 + std::abs(acc.c))) {
      acc.m = total;
      continue;
    }
    MergeResult r;
    if (o == Orientation::TypeI) {
      r = merge_observed(model, anchor, p.c, acc.c, p.m / total, o, obs);
    } else {
      r = merge_observed(model, anchor, acc.c, p.c, acc.m / total, o, obs);
    }
    out.anchor_mass += r.anchor_share * total;
    acc = {r.c, (1.0 - r.anchor_share) * total};
  }
  out.point = acc;
  return out;
}

std::vector<Mass> masses_of(const Design& d) {
  std::vector<Mass> pts;
  for (const auto& p : d.points()) pts.push_back({p.c, p.w});
  return pts;
}

std::vector<Mass> prepared(const Design& d) {
  std::vector<Mass> pts = masses_of(d);
  std::sort(pts.begin(), pts.end(), [](const Mass& x, const Mass& y) { return x.c < y.c; });
  std::vector<Mass> out;
  for (const auto& p : pts) {
    if (!out.empty() && std::abs(p.c - out.back().c) <= kSame) {
      out.back().m += p.m;
    } else {
      out.push_back(p);
    }
  }
  std::erase_if(out, [](const Mass& p) { return p.m < kDrop; });
  return out;
}

// A weight below kDrop is dropped only when its share of the information
// trace is negligible too: in a thin tail the anchor can carry most of it.
Design assemble(const Model& model, std::vector<Mass> pts, const Interval& region) {
  auto info = [&](const Mass& p) { return p.m > 0.0 ? p.m * (psi(model, 1, p.c) + psi(model, 3, p.c)) : 0.0; };
  double trace = 0.0;
  for (const auto& p : pts) trace += info(p);
  std::erase_if(pts, [&](const Mass& p) { return !(p.m > 0.0) || (p.m < kDrop && info(p) <= kDrop * trace); });
  std::sort(pts.begin(), pts.end(), [](const Mass& x, const Mass& y) { return x.c < y.c; });
  std::vector<SupportPoint> out;
  double total = 0.0;
  for (const auto& p : pts) {
    const double c = std::clamp(p.c, region.lo, region.hi);
    if (!out.empty() && std::abs(c - out.back().c) <= kSame) {
      if (p.m > out.back().w) out.back().c = c;
      out.back().w += p.m;
    } else {
      out.push_back({c, p.m});
    }
    total += p.m;
  }
  for (auto& p : out) p.w /= total;
  return Design::make(std::move(out), region);
}

bool same_design(const Design& a, const Design& b) {
  if (a.size() != b.size()) return false;
  auto pa = a.points(), pb = b.points();
  auto by_c = [](const SupportPoint& x, const SupportPoint& y) { return x.c < y.c; };
  std::sort(pa.begin(), pa.end(), by_c);
  std::sort(pb.begin(), pb.end(), by_c);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (std::abs(pa[i].c - pb[i].c) > kSame || std::abs(pa[i].w - pb[i].w) > kSame) return false;
  }
  return true;
}

ReductionOutcome outcome(const Model& model, const Design& input, std::vector<Mass> pts,
                         Structure tag, std::array<int, 2> matched = {1, 2}, int slack = 3) {
  Design reduced = assemble(model, std::move(pts), input.region());
  if (same_design(reduced, input)) {
    return {input, certify(model, input, input, matched, slack), Structure::Unchanged};
  }
  Certificate cert = certify(model, input, reduced, matched, slack);
  return {std::move(reduced), cert, tag};
}

ReductionOutcome unchanged(const Model& model, const Design& input) {
  return {input, certify(model, input, input), Structure::Unchanged};
}

void require_parity(const Model& model) {
  if (!model.parity()) throw PreconditionError(model.id() + " is not an even model");
}

void require_finite(const Interval& r) {
  if (!r.finite() || !(r.lo < r.hi)) {
    throw PreconditionError("reduction needs a finite region with lo < hi");
  }
}

// Even models must be type I on [0, D]; that is what every fold toward 0 relies on.
void require_type_one_from_zero(const Model& model, double d) {
  if (d <= 0.0) return;
  if (check_type(model, {0.0, d}).verdict != Verdict::TypeI) {
    throw UnclassifiableRegion(model.id() + " is not type I on [0, " + std::to_string(d) + "]");
  }
}

bool slope_condition_from_zero(const Model& model, double d) {
  return d > 0.0 && check_condition_41(model, {0.0, d});
}

// Split of an even-model design into the origin and one folded point per side.
struct Sides {
  double zero = 0.0;
  Mass plus;
  Mass minus;  // minus.c <= 0
};

Sides fold_sides(const Model& model, const std::vector<Mass>& pts, const MergeObserver& obs) {
  Sides s;
  std::vector<Mass> pos, neg;
  for (const auto& p : pts) {
    if (std::abs(p.c) <= kSame) {
      s.zero += p.m;
    } else {
      (p.c > 0.0 ? pos : neg).push_back(p);
    }
  }
  const Fold fp = fold_toward(model, Orientation::TypeI, 0.0, pos, obs);
  const Fold fn = fold_toward(model, Orientation::TypeII, 0.0, neg, obs);
  s.zero += fp.anchor_mass + fn.anchor_mass;
  s.plus = fp.point;
  s.minus = fn.point;
  return s;
}

// Both sides merged onto one radius c with total mass mass; the rest sits at 0.
struct Radial {
  double c = 0.0;
  double mass = 0.0;
  double zero = 0.0;
  double psi2_moment = 0.0;  // signed Psi2 moment of the whole design
};

Radial merge_radii(const Model& model, const Sides& s, const MergeObserver& obs) {
  Radial r;
  r.zero = s.zero;
  r.psi2_moment = s.plus.m * psi(model, 2, s.plus.c) + s.minus.m * psi(model, 2, s.minus.c);
  const double a = -s.minus.c, wa = s.minus.m;
  const double b = s.plus.c, wb = s.plus.m;
  if (wa <= 0.0) {
    r.c = b;
    r.mass = wb;
  } else if (wb <= 0.0) {
    r.c = a;
    r.mass = wa;
  } else if (std::abs(a - b) <= kRootTol * (1.0 + b)) {
    r.c = b;
    r.mass = wa + wb;
  } else {
    const double total = wa + wb;
    const double w1 = (a < b ? wa : wb) / total;
    const MergeResult m = merge_observed(model, 0.0, std::min(a, b), std::max(a, b), w1,
                                         Orientation::TypeI, obs);
    r.c = m.c;
    r.mass = (1.0 - m.anchor_share) * total;
    r.zero += m.anchor_share * total;
  }
  return r;
}

struct Points {
  std::vector<Mass> pts;
  Structure tag;
};

// Splits the radial mass over +-c so the Psi2 moment is restored, then, when
// the slope condition holds, absorbs the origin as well.
Points symmetric_points(const Model& model, const Radial& r, bool absorb_zero) {
  const double p = unit_fraction(0.5 * (r.psi2_moment / (r.mass * psi(model, 2, r.c)) + 1.0),
                                 "symmetric split weight");
  if (!absorb_zero || r.zero < kDrop) {
    Structure tag = r.zero < kDrop ? Structure::TwoSymmetric : Structure::TwoSymmetricPlusZero;
    return {{{-r.c, (1.0 - p) * r.mass}, {0.0, r.zero}, {r.c, p * r.mass}}, tag};
  }
  const double total = r.zero + r.mass;
  const double c0 = single_merge(model, 0.0, r.c, r.zero / total);
  const double a = unit_fraction(0.5 * (1.0 + r.psi2_moment / (total * psi(model, 2, c0))),
                                 "two-point split weight");
  return {{{-c0, (1.0 - a) * total}, {c0, a * total}}, Structure::TwoSymmetric};
}

Points symmetric_pipeline(const Model& model, const std::vector<Mass>& pts, bool absorb_zero,
                          const MergeObserver& obs) {
  return symmetric_points(model, merge_radii(model, fold_sides(model, pts, obs), obs), absorb_zero);
}

// Region [-d, hi] with 0 < d < hi.
Points asymmetric_pipeline(const Model& model, const std::vector<Mass>& pts, double d,
                           bool absorb_zero, const MergeObserver& obs) {
  const Sides s = fold_sides(model, pts, obs);
  const Radial rad = merge_radii(model, s, obs);
  if (rad.c <= d + kSame) {
    Points out = symmetric_points(model, rad, absorb_zero);
    for (auto& p : out.pts) p.c = std::clamp(p.c, -d, d);
    return out;
  }

  // Merge the negative side with just enough of the positive side that the
  // merged point lands exactly on d.
  const double a = -s.minus.c, wn = s.minus.m;
  const double cp = s.plus.c, wp = s.plus.m;
  double p0 = 0.0;
  if (wn > 0.0 && a < d - kRootTol) {
    auto landing = [&](double p) {
      return merge_unchecked(model, 0.0, a, cp, wn / (wn + p * wp), Orientation::TypeI).c - d;
    };
    p0 = bisect(landing, 0.0, 1.0, a - d, rad.c - d, kRootTol, kRootIter);
    merge_observed(model, 0.0, a, cp, wn / (wn + p0 * wp), Orientation::TypeI, obs);
  }
  const double s1 = wn * psi(model, 1, a) + p0 * wp * psi(model, 1, cp);
  const double s2 = wn * psi(model, 2, a) + p0 * wp * psi(model, 2, cp);
  const double n0 = -wn * psi(model, 2, a) + p0 * wp * psi(model, 2, cp);
  const double w1 = s2 / psi(model, 2, d);
  const double zero_add = std::max(0.0, (s1 - w1 * psi(model, 1, d)) / psi(model, 1, 0.0));
  const double p1 =
      w1 > 0.0 ? unit_fraction(0.5 * (n0 / (w1 * psi(model, 2, d)) + 1.0), "endpoint split weight")
               : 0.0;

  double wd = w1 * (1.0 - p1);
  double zero = s.zero + zero_add;
  const double at_d = w1 * p1, rest = wp * (1.0 - p0);
  double cx = cp, wx = rest;
  if (at_d > 0.0 && rest > 0.0) {
    const double total = at_d + rest;
    const MergeResult m = merge_observed(model, 0.0, d, cp, at_d / total, Orientation::TypeI, obs);
    zero += m.anchor_share * total;
    cx = m.c;
    wx = (1.0 - m.anchor_share) * total;
  } else if (rest <= 0.0) {
    cx = d;
    wx = at_d;
  }
  if (!absorb_zero) return {{{-d, wd}, {0.0, zero}, {cx, wx}}, Structure::D1Anchored};

  const double total = zero + wx;
  const double c0 = single_merge(model, 0.0, cx, zero / total);
  if (c0 <= d) {
    const double share = unit_fraction(
        0.5 * (1.0 + wx * psi(model, 2, cx) / (total * psi(model, 2, c0))), "two-point split weight");
    const std::vector<Mass> inner{{-d, wd}, {-c0, (1.0 - share) * total}, {c0, share * total}};
    return symmetric_pipeline(model, inner, true, obs);
  }

  // Move part of cx, together with the origin, onto +-d; then trade mass
  // between +d and -d while pulling cx inward until the Psi2 moments agree.
  const double px = unit_fraction(
      zero * (psi(model, 1, 0.0) - psi(model, 1, d)) / (wx * (psi(model, 1, d) - psi(model, 1, cx))),
      "partial merge fraction");
  const double moved = zero + wx * px;
  const double plus_d =
      moved > 0.0 ? moved * unit_fraction(0.5 * (1.0 + wx * px * psi(model, 2, cx) /
                                                           (moved * psi(model, 2, d))),
                                          "endpoint split weight")
                  : 0.0;
  wd += moved - plus_d;
  const double wx0 = wx * (1.0 - px);
  if (plus_d <= 0.0) return {{{-d, wd}, {cx, wx0}}, Structure::D1Anchored};

  auto inner_point = [&](double q) {
    return single_merge(model, d, cx, plus_d * q / (plus_d * q + wx0));
  };
  auto offdiag = [&](double q) {
    return (plus_d * q + wx0) * psi(model, 2, inner_point(q)) +
           plus_d * (2.0 - q) * psi(model, 2, -d) - wx0 * psi(model, 2, cx);
  };
  const double q = bisect(offdiag, 0.0, 1.0, kRootTol, kRootIter);
  return {{{-d, wd + plus_d * (1.0 - q)}, {inner_point(q), plus_d * q + wx0}},
          Structure::D1Anchored};
}

}  // namespace

MergeResult merge_pair(const Model& model, double anchor, double c1, double c2, double omega,
                       Orientation orientation) {
  if (!(omega >= 0.0 && omega <= 1.0)) throw PreconditionError("omega must lie in [0, 1]");
  if (!(c1 < c2)) throw PreconditionError("merge_pair needs c1 < c2");
  if (orientation == Orientation::TypeI && !(anchor < c1)) {
    throw PreconditionError("type I merge needs anchor < c1");
  }
  if (orientation == Orientation::TypeII && !(c2 < anchor)) {
    throw PreconditionError("type II merge needs c2 < anchor");
  }
  return merge_unchecked(model, anchor, c1, c2, omega, orientation);
}

double merge_to_single(const Model& model, double c1, double c2, double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) throw PreconditionError("omega must lie in [0, 1]");
  if (!(c1 < c2)) throw PreconditionError("merge_to_single needs c1 < c2");
  for (int i = 1; i < 128; ++i) {
    const double c = c1 + (c2 - c1) * i / 128.0;
    if (model.kinked() && std::abs(c) < 1e-8) continue;
    const ConditionFactors f = model.factors(c);
    if (!(f.psi1_slope < 0.0) || !(f.ratio13_slope > 1e-11 * (1.0 + f.ratio13_scale))) {
      throw PreconditionError("merge_to_single needs Psi1 decreasing and (Psi3'/Psi1')' > 0");
    }
  }
  return single_merge(model, c1, c2, omega);
}

EndpointCheck endpoint_dominates(const Model& model, double a, double b, double c) {
  if (!(a < b) || c < a || c > b) throw PreconditionError("endpoint check needs a <= c <= b, a < b");
  for (int i = 0; i <= 128; ++i) {
    const double x = a + (b - a) * i / 128.0;
    if (model.kinked() && std::abs(x) < 1e-8) continue;
    const ConditionFactors f = model.factors(x);
    const double prod = f.psi1_slope * f.ratio13_slope;
    if (!(prod > 1e-11 * (1.0 + std::abs(f.psi1_slope) * f.ratio13_scale))) {
      throw PreconditionError("endpoint check needs Psi1' (Psi3'/Psi1')' > 0 on [a, b]");
    }
  }
  const double omega = (psi(model, 1, b) - psi(model, 1, c)) / (psi(model, 1, b) - psi(model, 1, a));
  const double mix = omega * psi(model, 3, a) + (1.0 - omega) * psi(model, 3, b);
  return {omega, psi(model, 3, c) <= mix + 1e-12};
}

const char* to_string(Structure s) {
  switch (s) {
    case Structure::TwoSymmetric: return "two-symmetric";
    case Structure::TwoSymmetricPlusZero: return "two-symmetric-plus-zero";
    case Structure::EndpointPairLower: return "endpoint-pair-lower";
    case Structure::EndpointPairUpper: return "endpoint-pair-upper";
    case Structure::D1Anchored: return "d1-anchored";
    case Structure::Endpoints: return "endpoints";
    case Structure::Unchanged: return "unchanged";
  }
  return "";
}

bool Certificate::valid() const {
  return std::abs(moment_residuals[0]) <= 1e-9 && std::abs(moment_residuals[1]) <= 1e-9 &&
         third_moment_slack >= -1e-10 && psd_margin >= -1e-8 * input_trace;
}

Certificate certify(const Model& model, const Design& input, const Design& reduced,
                    std::array<int, 2> matched, int slack_index) {
  const InfoMatrix ci = c_matrix(input, model);
  const InfoMatrix cr = c_matrix(reduced, model);
  const InfoMatrix diff = cr - ci;
  auto entry = [&](int j) { return j == 1 ? diff.m11 : j == 2 ? diff.m12 : diff.m22; };
  Certificate cert;
  cert.matched = matched;
  cert.slack_index = slack_index;
  cert.moment_residuals = {entry(matched[0]), entry(matched[1])};
  cert.third_moment_slack = entry(slack_index);
  cert.psd_margin = diff.eigenvalues().first;
  cert.input_trace = ci.trace();
  return cert;
}

ReductionOutcome collapse(const Model& model, const Design& design, const Classification& verdict,
                          const MergeObserver& observer) {
  if (verdict.verdict == Verdict::Neither) {
    throw UnclassifiableRegion("collapse needs a type I or type II verdict");
  }
  const Interval& r = design.region();
  if (std::abs(verdict.interval.lo - r.lo) > kSame || std::abs(verdict.interval.hi - r.hi) > kSame) {
    throw PreconditionError("classification interval differs from the design region");
  }
  if (design.size() <= 1) return unchanged(model, design);
  const bool lower = verdict.verdict == Verdict::TypeI;
  const double anchor = lower ? r.lo : r.hi;
  const Fold f = fold_toward(model, lower ? Orientation::TypeI : Orientation::TypeII, anchor,
                             prepared(design), observer);
  return outcome(model, design, {{anchor, f.anchor_mass}, f.point},
                 lower ? Structure::EndpointPairLower : Structure::EndpointPairUpper);
}

ReductionOutcome symmetrize_binary(const Model& model, const Design& design,
                                   const MergeObserver& observer) {
  require_parity(model);
  const Interval& r = design.region();
  require_finite(r);
  if (std::abs(r.lo + r.hi) > 1e-12 * std::max(1.0, r.hi)) {
    throw PreconditionError("symmetrization needs a region [-D, D]");
  }
  const auto pts = prepared(design);
  if (pts.size() <= 1) return unchanged(model, design);
  require_type_one_from_zero(model, r.hi);
  Points out = symmetric_pipeline(model, pts, slope_condition_from_zero(model, r.hi), observer);
  return outcome(model, design, std::move(out.pts), out.tag);
}

ReductionOutcome reduce_one_sided(const Model& model, const Design& design,
                                  const MergeObserver& observer) {
  require_parity(model);
  const Interval& r = design.region();
  require_finite(r);
  if (r.lo < 0.0 && r.hi > 0.0) throw PreconditionError("region straddles 0");
  if (design.size() <= 1) return unchanged(model, design);
  const Classification cls = check_type(model, r);
  const Verdict expected = r.lo >= 0.0 ? Verdict::TypeI : Verdict::TypeII;
  if (cls.verdict != expected) {
    throw UnclassifiableRegion(model.id() + " does not have the expected type on the region");
  }
  return collapse(model, design, cls, observer);
}

ReductionOutcome reduce_asymmetric(const Model& model, const Design& design,
                                   const MergeObserver& observer) {
  require_parity(model);
  const Interval& r = design.region();
  require_finite(r);
  if (!(r.lo < 0.0 && r.hi > 0.0)) throw PreconditionError("region must contain 0 in its interior");
  if (std::abs(r.lo + r.hi) <= 1e-12 * std::max(1.0, r.hi)) {
    throw PreconditionError("region is symmetric; use symmetrize_binary");
  }
  auto pts = prepared(design);
  if (pts.size() <= 1) return unchanged(model, design);

  const bool flip = -r.lo > r.hi;
  if (flip) {
    for (auto& p : pts) p.c = -p.c;
  }
  const double d = flip ? r.hi : -r.lo;
  const double far = flip ? -r.lo : r.hi;
  require_type_one_from_zero(model, far);
  Points out = asymmetric_pipeline(model, pts, d, slope_condition_from_zero(model, far), observer);
  if (flip) {
    for (auto& p : out.pts) p.c = -p.c;
  }
  return outcome(model, design, std::move(out.pts), out.tag);
}

ReductionOutcome reduce_endpoints(const Model& model, const Design& design) {
  if (!model.degenerate()) throw PreconditionError(model.id() + " has no constant Psi");
  const Interval& r = design.region();
  require_finite(r);
  // The constant Psi is matched by the total weight; match the one whose
  // companion is convex in it, which leaves the third with non-negative slack.
  const double m = model.parameter();
  const int match = m == -1.0 ? 1 : 2;
  const int constant = m == 0.0 ? 1 : m == -1.0 ? 2 : 3;
  const int slack = 6 - match - constant;
  double target = 0.0;
  for (const auto& p : design.points()) target += p.w * psi(model, match, p.c);
  const double hi_val = psi(model, match, r.hi), lo_val = psi(model, match, r.lo);
  const double w = unit_fraction((hi_val - target) / (hi_val - lo_val), "endpoint weight");
  std::array<int, 2> matched{std::min(match, constant), std::max(match, constant)};
  return outcome(model, design, {{r.lo, w}, {r.hi, 1.0 - w}}, Structure::Endpoints, matched, slack);
}

ReductionOutcome reduce(const Model& model, const Design& design, const MergeObserver& observer) {
  const Interval& r = design.region();
  require_finite(r);
  if (prepared(design).size() <= 1 && !model.degenerate()) return unchanged(model, design);
  if (model.degenerate()) return reduce_endpoints(model, design);
  if (model.parity()) {
    if (std::abs(r.lo + r.hi) <= 1e-12 * std::max(1.0, r.hi)) {
      return symmetrize_binary(model, design, observer);
    }
    if (r.lo >= 0.0 || r.hi <= 0.0) return reduce_one_sided(model, design, observer);
    return reduce_asymmetric(model, design, observer);
  }
  const Classification cls = check_type(model, r);
  if (cls.verdict == Verdict::Neither) {
    throw UnclassifiableRegion(model.id() + " is neither type I nor type II on [" +
                               std::to_string(r.lo) + ", " + std::to_string(r.hi) + "]: " +
                               cls.reason);
  }
  return collapse(model, design, cls, observer);
}

}  // namespace ldopt
