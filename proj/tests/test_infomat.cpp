#include <cmath>
#include <random>

#include "doctest.h"
#include "ldopt/error.hpp"
#include "ldopt/infomat.hpp"

using namespace ldopt;

namespace {

const Interval kWide{-10.0, 10.0};

Design two_point(double a, double wa, double b) { return Design::make({{a, wa}, {b, 1.0 - wa}}, kWide); }

// T^T M T written out element by element.
InfoMatrix by_hand(const InfoMatrix& m, const Mat2& t) {
  const double M[2][2] = {{m.m11, m.m12}, {m.m12, m.m22}};
  const double T[2][2] = {{t.a11, t.a12}, {t.a21, t.a22}};
  double out[2][2] = {};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out[i][j] += T[k][i] * M[k][l] * T[l][j];
  return {out[0][0], out[0][1], out[1][1]};
}

}  // namespace

TEST_CASE("C matrices from moment sums") {
  const Model lg = Model::logistic();
  const InfoMatrix single = c_matrix(Design::make({{0.7, 1.0}}, kWide), lg);
  CHECK(single.m11 == doctest::Approx(lg.psi(1, 0.7)));
  CHECK(single.m12 == doctest::Approx(lg.psi(2, 0.7)));
  CHECK(single.m22 == doctest::Approx(lg.psi(3, 0.7)));

  const double psi1 = M_E / ((1 + M_E) * (1 + M_E));
  const InfoMatrix sym = c_matrix(two_point(-1.0, 0.5, 1.0), lg);
  CHECK(sym.m11 == doctest::Approx(psi1).epsilon(1e-14));
  CHECK(std::abs(sym.m12) <= 1e-17);
  CHECK(sym.m22 == doctest::Approx(psi1).epsilon(1e-14));

  const InfoMatrix p = c_matrix(Design::make({{0.0, 1.0}}, kWide), Model::poisson_loglinear());
  CHECK(p.m11 == 1.0);
  CHECK(p.m12 == 0.0);
  CHECK(p.m22 == 0.0);
}

TEST_CASE("C is affine in the weights") {
  const Model m = Model::probit();
  const std::vector<SupportPoint> a{{-1.0, 0.25}, {0.5, 0.75}}, b{{0.2, 0.6}, {1.8, 0.4}};
  for (double lam : {0.0, 0.3, 0.5, 0.9, 1.0}) {
    std::vector<SupportPoint> mix;
    for (auto p : a) mix.push_back({p.c, lam * p.w});
    for (auto p : b) mix.push_back({p.c, (1 - lam) * p.w});
    const InfoMatrix blended = lam * c_matrix(a, m) + (1 - lam) * c_matrix(b, m);
    const InfoMatrix direct = c_matrix(mix, m);
    CHECK(direct.m11 == doctest::Approx(blended.m11).epsilon(1e-12));
    CHECK(direct.m12 == doctest::Approx(blended.m12).epsilon(1e-12));
    CHECK(direct.m22 == doctest::Approx(blended.m22).epsilon(1e-12));
  }
}

TEST_CASE("information matrices through A and B") {
  const Model lg = Model::logistic();
  const Design d = two_point(-0.4, 0.3, 1.3);
  const InfoMatrix c = c_matrix(d, lg);

  const InfoMatrix i0 = info_matrix(d, lg, 0.0, 1.0);
  CHECK(i0.m11 == c.m11);
  CHECK(i0.m12 == c.m12);
  CHECK(i0.m22 == c.m22);

  const InfoMatrix ident = info_matrix(d, lg, 0.7, 1.9, ParamTransform{});
  const InfoMatrix none = info_matrix(d, lg, 0.7, 1.9);
  CHECK(ident.m11 == doctest::Approx(none.m11));
  CHECK(ident.m22 == doctest::Approx(none.m22));

  // alpha = 1, beta = 2, single point c = 1.
  const Design one = Design::make({{1.0, 1.0}}, kWide);
  const Mat2 a{1.0, -0.5, 0.0, 0.5};
  const InfoMatrix want = by_hand(c_matrix(one, lg), a);
  const InfoMatrix got = info_matrix(one, lg, 1.0, 2.0);
  CHECK(got.m11 == doctest::Approx(want.m11).epsilon(1e-14));
  CHECK(got.m12 == doctest::Approx(want.m12).epsilon(1e-14));
  CHECK(got.m22 == doctest::Approx(want.m22).epsilon(1e-14));
}

TEST_CASE("reparameterisations") {
  CHECK(ParamTransform::parse("identity").kind == ReparamKind::Identity);
  CHECK(ParamTransform::parse("mu-beta").kind == ReparamKind::MuBeta);
  const ParamTransform s = ParamTransform::parse("scaled(0.25)");
  CHECK(s.kind == ReparamKind::Scaled);
  CHECK(s.lambda == 0.25);
  CHECK(ParamTransform::parse(s.name()) == s);
  CHECK_THROWS_AS(ParamTransform::parse("scaled(1.5)"), DomainError);
  CHECK_THROWS_AS(ParamTransform::parse("log"), DomainError);

  // mu = alpha / beta: the Jacobian has rows (1/beta, -alpha/beta^2), (0, 1).
  const Mat2 b = ParamTransform::parse("mu-beta").b_matrix(1.0, 2.0);
  CHECK(b.a11 == doctest::Approx(0.5));
  CHECK(b.a12 == doctest::Approx(-0.25));
  CHECK(b.a21 == 0.0);
  CHECK(b.a22 == 1.0);

  const Model lg = Model::logistic();
  const Design d = two_point(-1.0, 0.4, 2.0);
  const InfoMatrix i = info_matrix(d, lg, 1.0, 2.0);
  const InfoMatrix j = info_matrix(d, lg, 1.0, 2.0, ParamTransform::parse("mu-beta"));
  const InfoMatrix want = by_hand(i, b.inverse());
  CHECK(j.m11 == doctest::Approx(want.m11).epsilon(1e-12));
  CHECK(j.m12 == doctest::Approx(want.m12).epsilon(1e-12));
  CHECK(j.m22 == doctest::Approx(want.m22).epsilon(1e-12));
}

TEST_CASE("Loewner comparison") {
  const InfoMatrix m{1.0, 0.3, 2.0};
  CHECK(loewner_compare(m, m) == Loewner::Equal);
  CHECK(loewner_compare({2, 0, 2}, {1, 0, 1}) == Loewner::Dominates);
  CHECK(loewner_compare({1, 0, 1}, {2, 0, 2}) == Loewner::DominatedBy);
  CHECK(loewner_compare({2, 0, 0.5}, {1, 0, 1}) == Loewner::Incomparable);
  CHECK(std::string(to_string(Loewner::Incomparable)) == "Incomparable");
}

TEST_CASE("congruence preserves the Loewner verdict") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const Model lg = Model::logistic();
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const InfoMatrix a = c_matrix(two_point(u(rng), 0.5, u(rng) + 4.5), lg);
    const InfoMatrix b = c_matrix(two_point(u(rng), 0.3, u(rng) + 4.5), lg);
    const Mat2 t{u(rng), u(rng), u(rng), u(rng)};
    if (std::abs(t.det()) < 0.1) continue;
    const Loewner before = loewner_compare(a, b, 0.0);
    const InfoMatrix ta = congruence(a, t), tb = congruence(b, t);
    // Equal and strict verdicts must survive the change of basis.
    const auto [lo, hi] = (ta - tb).eigenvalues();
    const double slack = 1e-12 * (ta.trace() + tb.trace());
    switch (before) {
      case Loewner::Dominates: CHECK(lo >= -slack); break;
      case Loewner::DominatedBy: CHECK(hi <= slack); break;
      case Loewner::Incomparable: CHECK((lo < slack && hi > -slack)); break;
      case Loewner::Equal: break;
    }
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("eigenvalues keep precision for nearly singular matrices") {
  const double c = 1.3, p = 0.2;
  const InfoMatrix rank1{p, p * c, p * c * c};
  const auto [lo, hi] = rank1.eigenvalues();
  CHECK(std::abs(lo) <= 1e-16);
  CHECK(hi == doctest::Approx(p * (1 + c * c)));
}
