#include "ldopt/optimizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

#include "ldopt/classifier.hpp"
#include "ldopt/error.hpp"
#include "ldopt/scalar.hpp"

namespace ldopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kXTol = 1e-10;
constexpr int kStarts = 8;
constexpr double kPenalty = 1e300;

std::string shortest(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view s, std::string_view whole) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s == "-inf") return -kInf;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DomainError("malformed criterion '" + std::string(whole) + "'");
  }
  return v;
}

struct PointInfo {
  double c;
  double p1, p2, p3;
};

PointInfo point_info(const Model& model, double c) {
  const double b = model.base(c);
  return {c, b, c * b, c * c * b};
}

// Evaluates the criterion for a candidate second-stage C matrix, adding the
// fixed first stage when there is one.
class Objective {
 public:
  Objective(const Model& model, double alpha, double beta, const Criterion& crit,
            const Design* d1, double new_mass)
      : crit_(crit), new_mass_(new_mass) {
    t_ = model.a_matrix(alpha, beta);
    if (crit.transform && crit.transform->kind != ReparamKind::Identity) {
      const Mat2 b = crit.transform->b_matrix(alpha, beta);
      if (b.det() == 0.0) throw PreconditionError("reparameterisation matrix is singular");
      t_ = t_ * b.inverse();
    }
    if (d1 != nullptr && !d1->empty()) {
      has_base_ = true;
      base_ = (1.0 - new_mass) * c_matrix(*d1, model);
    }
  }

  double operator()(const InfoMatrix& c2) const {
    const InfoMatrix c = has_base_ ? base_ + new_mass_ * c2 : c2;
    return criterion_value(congruence(c, t_), crit_);
  }

 private:
  const Criterion& crit_;
  double new_mass_;
  Mat2 t_;
  bool has_base_ = false;
  InfoMatrix base_;
};

InfoMatrix combine(const std::vector<PointInfo>& pts, const std::vector<double>& w) {
  InfoMatrix m;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    m.m11 += w[i] * pts[i].p1;
    m.m12 += w[i] * pts[i].p2;
    m.m22 += w[i] * pts[i].p3;
  }
  return m;
}

double as_cost(double value) { return std::isfinite(value) ? -value : kPenalty; }

// Weights from the free weight parameters: one parameter for two points, two
// for three points where the middle point is the origin.
std::vector<double> weights_of(std::size_t n, double u, double v) {
  if (n == 2) return {u, 1.0 - u};
  return {(1.0 - u) * (1.0 - v), u, (1.0 - u) * v};
}

struct WeightFit {
  double value = -kInf;
  double u = 0.5;
  double v = 0.5;
};

// Bisects the centred difference of a smooth objective near a located
// maximum; keeps the located point when the bracket shows no clean sign change.
double polish(const std::function<double(double)>& f, const Interval& range, double x) {
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  const double lo = std::max(x - 100 * h, range.lo + h), hi = std::min(x + 100 * h, range.hi - h);
  if (!(lo < hi)) return x;
  auto slope = [&](double t) { return f(t + h) - f(t - h); };
  const double slo = slope(lo), shi = slope(hi);
  if (!std::isfinite(slo) || !std::isfinite(shi) || !(slo > 0.0 && shi < 0.0)) return x;
  const double t = bisect(slope, lo, hi, slo, shi, 1e-15, 200);
  const double ft = f(t), fx = f(x);
  return ft >= fx - 1e-14 * std::abs(fx) ? t : x;
}

// Brent never samples the ends of its bracket, so the ends are compared
// explicitly; a vanishing weight is a common optimum.
Minimum unit_minimize(const std::function<double(double)>& f) {
  Minimum best = brent_minimize(f, 0.0, 1.0, kXTol);
  for (double end : {0.0, 1.0}) {
    const double fe = f(end);
    if (fe <= best.fx) best = {end, fe};
  }
  return best;
}

WeightFit best_weights(const Objective& obj, const std::vector<PointInfo>& pts) {
  const Interval unit{0.0, 1.0};
  WeightFit fit;
  if (pts.size() == 2) {
    auto f = [&](double u) { return obj(combine(pts, weights_of(2, u, 0.0))); };
    fit.u = polish(f, unit, unit_minimize([&](double u) { return as_cost(f(u)); }).x);
    fit.value = f(fit.u);
    return fit;
  }
  auto f = [&](double u, double v) { return obj(combine(pts, weights_of(3, u, v))); };
  auto best_v = [&](double u) {
    return unit_minimize([&](double v) { return as_cost(f(u, v)); }).x;
  };
  auto profile = [&](double u) { return f(u, best_v(u)); };
  fit.u = polish(profile, unit, unit_minimize([&](double u) { return as_cost(profile(u)); }).x);
  fit.v = polish([&](double v) { return f(fit.u, v); }, unit, best_v(fit.u));
  fit.value = f(fit.u, fit.v);
  return fit;
}

struct Layout {
  int coords = 0;                 // free support coordinates: 0, 1 or 2
  Interval range;                 // range of the first coordinate
  std::function<std::vector<double>(double, double)> points;
};

Layout layout_of(const SupportStructure& s, const Interval& r) {
  const bool straddles = r.lo < 0.0 && r.hi > 0.0;
  const double d = std::min(-r.lo, r.hi);
  switch (s.kind) {
    case StructureKind::TwoSymmetric:
      if (!straddles) throw PreconditionError("two-symmetric needs a region around 0");
      return {1, {0.0, d}, [](double c, double) { return std::vector<double>{-c, c}; }};
    case StructureKind::TwoSymmetricPlusZero:
      if (!straddles) throw PreconditionError("two-symmetric-plus-zero needs a region around 0");
      return {1, {0.0, d}, [](double c, double) { return std::vector<double>{-c, 0.0, c}; }};
    case StructureKind::TwoWithAnchor: {
      if (!r.contains(s.anchor)) throw PreconditionError("anchor lies outside the region");
      const double a = s.anchor;
      return {1, r, [a](double c, double) { return std::vector<double>{a, c}; }};
    }
    case StructureKind::AnchorPlusZero: {
      if (!straddles || !r.contains(s.anchor) || s.anchor == 0.0) {
        throw PreconditionError("anchor-plus-zero needs a nonzero anchor in a region around 0");
      }
      const double a = s.anchor;
      const Interval far = a < 0.0 ? Interval{0.0, r.hi} : Interval{r.lo, 0.0};
      return {1, far, [a](double c, double) { return std::vector<double>{a, 0.0, c}; }};
    }
    case StructureKind::Endpoints: {
      const double lo = r.lo, hi = r.hi;
      return {0, r, [lo, hi](double, double) { return std::vector<double>{lo, hi}; }};
    }
    case StructureKind::TwoFree:
      return {2, r, [](double c1, double c2) { return std::vector<double>{c1, c2}; }};
  }
  throw PreconditionError("unknown structure");
}

Interval prepared_region(const Model& model, Interval region) {
  if (std::isnan(region.lo) || std::isnan(region.hi) || region.lo > region.hi) {
    throw DomainError("region must satisfy lo <= hi");
  }
  if (!region.finite()) region = cap_interval(model, region);
  const Interval dom = model.natural_domain();
  if (region.lo < dom.lo || region.hi > dom.hi) {
    throw DomainError("region lies outside the natural domain of " + model.id());
  }
  if (!(region.lo < region.hi)) throw DomainError("empty feasible set: the region is a single point");
  return region;
}

std::vector<PointInfo> infos_at(const Model& model, const std::vector<double>& cs) {
  std::vector<PointInfo> out;
  out.reserve(cs.size());
  for (double c : cs) {
    try {
      out.push_back(point_info(model, c));
    } catch (const DomainError&) {
      out.push_back({c, 0.0, 0.0, 0.0});
    }
  }
  return out;
}

Design to_design(const std::vector<double>& cs, const std::vector<double>& ws, const Interval& r) {
  std::vector<SupportPoint> pts;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (ws[i] >= 1e-12) pts.push_back({std::clamp(cs[i], r.lo, r.hi), ws[i]});
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.c < b.c; });
  std::vector<SupportPoint> merged;
  for (const auto& p : pts) {
    if (!merged.empty() && std::abs(p.c - merged.back().c) <= Design::kDistinctTol) {
      merged.back().w += p.w;
    } else {
      merged.push_back(p);
    }
  }
  double total = 0.0;
  for (const auto& p : merged) total += p.w;
  for (auto& p : merged) p.w /= total;
  return Design::make(std::move(merged), r);
}

OptimizeResult search(const Model& model, const Interval& region, const Objective& obj,
                      const SupportStructure& structure) {
  const Layout lay = layout_of(structure, region);
  auto fit_at = [&](double x, double y) { return best_weights(obj, infos_at(model, lay.points(x, y))); };

  double x = 0.0, y = 0.0;
  if (lay.coords == 1) {
    auto value = [&](double c) { return fit_at(c, 0.0).value; };
    Minimum m = multistart_minimize([&](double c) { return as_cost(value(c)); }, lay.range.lo,
                                    lay.range.hi, kStarts, kXTol);
    for (double end : {lay.range.lo, lay.range.hi}) {
      const double fe = as_cost(value(end));
      if (fe <= m.fx) m = {end, fe};
    }
    x = polish(value, lay.range, m.x);
  } else if (lay.coords == 2) {
    const double hi = lay.range.hi;
    auto second = [&](double c1) {
      return brent_minimize([&](double c2) { return as_cost(fit_at(c1, c2).value); }, c1, hi, kXTol);
    };
    x = multistart_minimize([&](double c1) { return second(c1).fx; }, lay.range.lo, hi, kStarts,
                            kXTol)
            .x;
    y = second(x).x;
  }

  const std::vector<double> cs = lay.points(x, y);
  const auto pts = infos_at(model, cs);
  const WeightFit fit = best_weights(obj, pts);
  OptimizeResult out;
  out.design = to_design(cs, weights_of(cs.size(), fit.u, fit.v), region);
  out.value = obj(c_matrix(out.design, model));
  out.structure = structure;
  out.region = region;
  return out;
}

OptimizeResult best_over(const Model& model, const Interval& region, const Objective& obj) {
  std::optional<OptimizeResult> best;
  for (const auto& s : reduced_structures(model, region)) {
    OptimizeResult r = search(model, region, obj, s);
    if (!best || r.value > best->value) best = std::move(r);
  }
  return *best;
}

}  // namespace

Criterion Criterion::parse(std::string_view text) {
  Criterion c;
  if (text == "D") return c;
  if (text == "A") {
    c.kind = CriterionKind::A;
    return c;
  }
  if (text == "E") {
    c.kind = CriterionKind::E;
    return c;
  }
  if (text.starts_with("phi_p(") && text.ends_with(")")) {
    c.kind = CriterionKind::PhiP;
    c.p = parse_real(text.substr(6, text.size() - 7), text);
    if (!(c.p <= 1.0)) throw DomainError("phi_p needs p <= 1");
    return c;
  }
  if (text.starts_with("c(") && text.ends_with(")")) {
    const auto body = text.substr(2, text.size() - 3);
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) throw DomainError("c-criterion needs two components");
    c.kind = CriterionKind::COptimal;
    c.v = {parse_real(body.substr(0, comma), text), parse_real(body.substr(comma + 1), text)};
    if (!std::isfinite(c.v[0]) || !std::isfinite(c.v[1]) || (c.v[0] == 0.0 && c.v[1] == 0.0)) {
      throw DomainError("c-criterion needs a finite nonzero vector");
    }
    return c;
  }
  throw DomainError("unknown criterion '" + std::string(text) + "'");
}

std::string Criterion::name() const {
  switch (kind) {
    case CriterionKind::D: return "D";
    case CriterionKind::A: return "A";
    case CriterionKind::E: return "E";
    case CriterionKind::PhiP: return "phi_p(" + shortest(p) + ")";
    case CriterionKind::COptimal: return "c(" + shortest(v[0]) + "," + shortest(v[1]) + ")";
  }
  return {};
}

double criterion_value(const InfoMatrix& m, const Criterion& crit) {
  const double det = m.det();
  const auto [l1, l2] = m.eigenvalues();
  switch (crit.kind) {
    case CriterionKind::D: return std::max(det, 0.0);
    case CriterionKind::E: return l1;
    case CriterionKind::A:
      if (!(l1 > 0.0)) return -kInf;
      return -(1.0 / l1 + 1.0 / l2);
    case CriterionKind::PhiP: {
      const double p = crit.p;
      if (std::isinf(p)) return l1;
      if (p == 0.0) return std::sqrt(std::max(det, 0.0));
      if (p < 0.0 && !(l1 > 0.0)) return 0.0;
      const double a = std::max(l1, 0.0), b = std::max(l2, 0.0);
      return std::pow(0.5 * (std::pow(a, p) + std::pow(b, p)), 1.0 / p);
    }
    case CriterionKind::COptimal: {
      if (!(det > 0.0) || !(l1 > 0.0)) return -kInf;
      const double v1 = crit.v[0], v2 = crit.v[1];
      return -(v1 * v1 * m.m22 - 2.0 * v1 * v2 * m.m12 + v2 * v2 * m.m11) / det;
    }
  }
  return 0.0;
}

std::string SupportStructure::name() const {
  switch (kind) {
    case StructureKind::TwoSymmetric: return "two-symmetric";
    case StructureKind::TwoWithAnchor: return "two-with-anchor(" + shortest(anchor) + ")";
    case StructureKind::TwoSymmetricPlusZero: return "two-symmetric-plus-zero";
    case StructureKind::AnchorPlusZero: return "anchor-plus-zero(" + shortest(anchor) + ")";
    case StructureKind::Endpoints: return "endpoints";
    case StructureKind::TwoFree: return "two-free";
  }
  return {};
}

std::vector<SupportStructure> reduced_structures(const Model& model, Interval region) {
  if (!region.finite() || !(region.lo < region.hi)) {
    throw PreconditionError("structures need a finite region with lo < hi");
  }
  if (model.degenerate()) return {{StructureKind::Endpoints, 0.0}};
  if (model.parity()) {
    const double far = std::max(-region.lo, region.hi);
    if (region.lo >= 0.0) return {{StructureKind::TwoWithAnchor, region.lo}};
    if (region.hi <= 0.0) return {{StructureKind::TwoWithAnchor, region.hi}};
    const bool two_point = check_condition_41(model, {0.0, far});
    if (std::abs(region.lo + region.hi) <= 1e-12 * std::max(1.0, region.hi)) {
      return {{two_point ? StructureKind::TwoSymmetric : StructureKind::TwoSymmetricPlusZero, 0.0}};
    }
    const double near = -region.lo < region.hi ? region.lo : region.hi;
    if (two_point) {
      return {{StructureKind::TwoSymmetric, 0.0}, {StructureKind::TwoWithAnchor, near}};
    }
    return {{StructureKind::TwoSymmetricPlusZero, 0.0}, {StructureKind::AnchorPlusZero, near}};
  }
  const Classification cls = check_type(model, region);
  if (cls.verdict == Verdict::TypeI) return {{StructureKind::TwoWithAnchor, region.lo}};
  if (cls.verdict == Verdict::TypeII) return {{StructureKind::TwoWithAnchor, region.hi}};
  throw UnclassifiableRegion("no reduced support class is known for " + model.id() +
                             " on this region: " + cls.reason);
}

OptimizeResult optimize(const Model& model, Interval region, double alpha, double beta,
                        const Criterion& crit, const SupportStructure& structure) {
  region = prepared_region(model, region);
  return search(model, region, Objective(model, alpha, beta, crit, nullptr, 1.0), structure);
}

OptimizeResult optimize(const Model& model, Interval region, double alpha, double beta,
                        const Criterion& crit) {
  region = prepared_region(model, region);
  return best_over(model, region, Objective(model, alpha, beta, crit, nullptr, 1.0));
}

namespace {

void check_augment(const Design& d1, double new_mass) {
  if (!(new_mass > 0.0 && new_mass <= 1.0)) throw DomainError("new_mass must lie in (0, 1]");
  (void)d1;
}

}  // namespace

OptimizeResult augment_multistage(const Design& d1, const Model& model, Interval region,
                                  double alpha, double beta, const Criterion& crit,
                                  double new_mass, const SupportStructure& structure) {
  check_augment(d1, new_mass);
  region = prepared_region(model, region);
  return search(model, region, Objective(model, alpha, beta, crit, &d1, new_mass), structure);
}

OptimizeResult augment_multistage(const Design& d1, const Model& model, Interval region,
                                  double alpha, double beta, const Criterion& crit,
                                  double new_mass) {
  check_augment(d1, new_mass);
  region = prepared_region(model, region);
  return best_over(model, region, Objective(model, alpha, beta, crit, &d1, new_mass));
}

EquivalenceReport verify_equivalence_D(const Design& design, const Model& model, Interval region,
                                       int grid_n) {
  if (design.empty()) throw PreconditionError("equivalence check needs a nonempty design");
  region = prepared_region(model, region);
  const InfoMatrix c = c_matrix(design, model);
  const double scale = c.m11 * c.m22 + c.m12 * c.m12;
  if (!(c.det() > 1e-12 * scale)) throw PreconditionError("design is singular (det C = 0)");
  const double det = c.det();
  const double i11 = c.m22 / det, i12 = -c.m12 / det, i22 = c.m11 / det;
  auto variance = [&](double x) {
    double b = 0.0;
    try {
      b = model.base(x);
    } catch (const DomainError&) {
      // Open end of the natural domain, where the weight tends to zero.
    }
    return b * (i11 + 2.0 * x * i12 + x * x * i22);
  };

  grid_n = std::max(grid_n, 16);
  EquivalenceReport rep;
  rep.max_variance = -kInf;
  int best = 0;
  for (int i = 0; i <= grid_n; ++i) {
    const double x = region.lo + region.width() * i / grid_n;
    const double v = variance(x);
    if (v > rep.max_variance) {
      rep.max_variance = v;
      rep.argmax = x;
      best = i;
    }
  }
  const double step = region.width() / grid_n;
  const double lo = std::max(region.lo, region.lo + (best - 1) * step);
  const double hi = std::min(region.hi, region.lo + (best + 1) * step);
  const Minimum m = brent_minimize([&](double x) { return -variance(x); }, lo, hi, 1e-12);
  if (-m.fx > rep.max_variance) {
    rep.max_variance = -m.fx;
    rep.argmax = m.x;
  }
  bool equal_on_support = true;
  for (const auto& p : design.points()) {
    const double v = variance(p.c);
    rep.support_variances.push_back(v);
    if (v > rep.max_variance) {
      rep.max_variance = v;
      rep.argmax = p.c;
    }
    if (std::abs(v - 2.0) > kEquivalenceTol) equal_on_support = false;
  }
  rep.certified = rep.max_variance <= 2.0 + kEquivalenceTol && equal_on_support;
  return rep;
}

}  // namespace ldopt
