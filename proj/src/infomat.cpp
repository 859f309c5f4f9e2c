#include "ldopt/infomat.hpp"

#include <charconv>
#include <cmath>

#include "ldopt/error.hpp"

namespace ldopt {

InfoMatrix c_matrix(std::span<const SupportPoint> points, const Model& model) {
  InfoMatrix m;
  for (const auto& p : points) {
    const double psi = model.base(p.c);
    m.m11 += p.w * psi;
    m.m12 += p.w * p.c * psi;
    m.m22 += p.w * p.c * p.c * psi;
  }
  return m;
}

InfoMatrix c_matrix(const Design& design, const Model& model) {
  return c_matrix(std::span<const SupportPoint>(design.points()), model);
}

InfoMatrix congruence(const InfoMatrix& m, const Mat2& t) {
  return InfoMatrix::from(t.transpose() * m.as_mat() * t);
}

ParamTransform ParamTransform::parse(std::string_view text) {
  if (text == "identity") return {ReparamKind::Identity, 0.0};
  if (text == "mu-beta") return {ReparamKind::MuBeta, 0.0};
  constexpr std::string_view kScaled = "scaled(";
  if (text.starts_with(kScaled) && text.ends_with(")")) {
    const auto body = text.substr(kScaled.size(), text.size() - kScaled.size() - 1);
    double lambda = 0.0;
    const auto res = std::from_chars(body.data(), body.data() + body.size(), lambda);
    if (res.ec == std::errc() && res.ptr == body.data() + body.size()) {
      if (!(lambda > 0.0 && lambda < 1.0)) {
        throw DomainError("scaled transform needs 0 < lambda < 1");
      }
      return {ReparamKind::Scaled, lambda};
    }
  }
  throw DomainError("unknown transform '" + std::string(text) + "'");
}

std::string ParamTransform::name() const {
  switch (kind) {
    case ReparamKind::Identity: return "identity";
    case ReparamKind::MuBeta: return "mu-beta";
    case ReparamKind::Scaled: {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, lambda);
      return "scaled(" + std::string(buf, res.ptr) + ")";
    }
  }
  return {};
}

Mat2 ParamTransform::b_matrix(double alpha, double beta) const {
  if (kind == ReparamKind::Identity) return Mat2::identity();
  if (beta == 0.0) throw PreconditionError("reparameterisation is singular for beta = 0");
  if (kind == ReparamKind::MuBeta) return {1.0 / beta, -alpha / (beta * beta), 0.0, 1.0};
  const double s = std::sqrt(lambda);
  return {s / beta, -s * alpha / (beta * beta), 0.0, std::sqrt(1.0 - lambda)};
}

InfoMatrix transform_info(const InfoMatrix& c, const Model& model, double alpha, double beta,
                          const std::optional<ParamTransform>& transform) {
  InfoMatrix m = congruence(c, model.a_matrix(alpha, beta));
  if (transform && transform->kind != ReparamKind::Identity) {
    const Mat2 b = transform->b_matrix(alpha, beta);
    if (b.det() == 0.0) throw PreconditionError("reparameterisation matrix is singular");
    m = congruence(m, b.inverse());
  }
  return m;
}

InfoMatrix info_matrix(const Design& design, const Model& model, double alpha, double beta,
                       const std::optional<ParamTransform>& transform) {
  return transform_info(c_matrix(design, model), model, alpha, beta, transform);
}

const char* to_string(Loewner v) {
  switch (v) {
    case Loewner::Dominates: return "Dominates";
    case Loewner::DominatedBy: return "DominatedBy";
    case Loewner::Equal: return "Equal";
    case Loewner::Incomparable: return "Incomparable";
  }
  return "";
}

Loewner loewner_compare(const InfoMatrix& m1, const InfoMatrix& m2, double tol) {
  const auto [lo, hi] = (m1 - m2).eigenvalues();
  const double slack = tol * (m1.trace() + m2.trace());
  const bool up = lo >= -slack;
  const bool down = hi <= slack;
  if (up && down) return Loewner::Equal;
  if (up) return Loewner::Dominates;
  if (down) return Loewner::DominatedBy;
  return Loewner::Incomparable;
}

}  // namespace ldopt
