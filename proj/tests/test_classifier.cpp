#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "ldopt/classifier.hpp"
#include "ldopt/error.hpp"

using namespace ldopt;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("verdicts for the documented intervals") {
  CHECK(check_type(Model::logistic(), {0.0, 20.0}).verdict == Verdict::TypeI);
  CHECK(check_type(Model::poisson_loglinear(), {-3.0, 3.0}).verdict == Verdict::TypeII);
  CHECK(check_type(Model::michaelis_menten(), {0.5, 2.0}).verdict == Verdict::TypeII);
  CHECK(check_type(Model::double_exponential(), {0.0, 20.0}).verdict == Verdict::TypeI);
  CHECK(check_type(Model::double_reciprocal(), {0.0, 20.0}).verdict == Verdict::TypeI);
}

TEST_CASE("an interval spanning a breakpoint is Neither, with the violation recorded") {
  const Classification c = check_type(Model::cloglog(), {-1.0, 1.0});
  CHECK(c.verdict == Verdict::Neither);
  REQUIRE(c.first_violation.has_value());
  CHECK(*c.first_violation > -1.0);
  CHECK(*c.first_violation < 1.0);
  CHECK_FALSE(c.reason.empty());
  CHECK_FALSE(c.diagnostics.empty());
}

TEST_CASE("even binary models are type I on random nonnegative intervals") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (const Model& m : {Model::logistic(), Model::probit(), Model::double_exponential(),
                         Model::double_reciprocal()}) {
    for (int i = 0; i < 20; ++i) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-3) continue;
      CAPTURE(m.id());
      CAPTURE(a);
      CAPTURE(b);
      CHECK(check_type(m, {a, b}).verdict == Verdict::TypeI);
    }
  }
}

TEST_CASE("power family partition") {
  for (double m : {0.5, 1.0, 2.0, -0.5, -1.5}) {
    CAPTURE(m);
    CHECK(check_type(Model::power(m), {0.5, 4.0}).verdict == Verdict::TypeII);
  }
  for (double m : {-2.5, -3.0}) {
    CAPTURE(m);
    CHECK(check_type(Model::power(m), {0.5, 4.0}).verdict == Verdict::TypeI);
  }
}

TEST_CASE("reflection duality") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const Model models[] = {Model::poisson_loglinear(), Model::cloglog(), Model::hedayat(0.5),
                          Model::logistic(), Model::power(-3.0)};
  for (const Model& m : models) {
    const Triple t(m);
    for (int i = 0; i < 10; ++i) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      if (m.natural_domain().lo >= 0.0) {
        a = std::abs(a) + 0.1;
        b = a + std::abs(b) + 0.1;
      }
      if (b - a < 0.05) continue;
      CAPTURE(m.id());
      CAPTURE(a);
      CAPTURE(b);
      const bool type2 = check_type(t, {a, b}).verdict == Verdict::TypeII;
      const bool mirrored1 = check_type(t.reflected(), {-b, -a}).verdict == Verdict::TypeI;
      CHECK(type2 == mirrored1);
    }
  }
}

TEST_CASE("type I and type II are exclusive") {
  for (double a = -3.0; a < 3.0; a += 0.5) {
    const Classification c = check_type(Model::cloglog(), {a, a + 0.4});
    CHECK((c.verdict == Verdict::TypeI) + (c.verdict == Verdict::TypeII) <= 1);
  }
}

TEST_CASE("breakpoints") {
  SUBCASE("cloglog") {
    const auto bps = find_breakpoints(Model::cloglog(), {-5.0, 5.0});
    REQUIRE(bps.size() == 2);
    CHECK(bps[0].kind == BreakpointKind::RatioConditionZero);
    CHECK(bps[1].kind == BreakpointKind::Psi1PrimeZero);
    CHECK(std::abs(bps[0].c - 0.0491) <= 5e-4);
    CHECK(std::abs(bps[1].c - 0.4660) <= 5e-4);
    CHECK(bps[0].c == doctest::Approx(0.049084081918110985).epsilon(1e-9));
    CHECK(bps[1].c == doctest::Approx(0.46601083115102154).epsilon(1e-9));
  }
  SUBCASE("hedayat r = 0.5") {
    const auto bps = find_breakpoints(Model::hedayat(0.5), {-5.0, 5.0});
    REQUIRE(bps.size() == 2);
    CHECK(bps[0].kind == BreakpointKind::RatioConditionZero);
    CHECK(bps[1].kind == BreakpointKind::Psi1PrimeZero);
    CHECK(bps[0].c == doctest::Approx(-0.9130989640669855).epsilon(1e-9));
    // Psi' = 0 where e^c = r, i.e. c = log r.
    CHECK(bps[1].c == doctest::Approx(std::log(0.5)).epsilon(1e-9));
  }
  SUBCASE("no sign change") { CHECK(find_breakpoints(Model::logistic(), {0.1, 20.0}).empty()); }
  SUBCASE("denser scans move no root") {
    const auto coarse = find_breakpoints(Model::cloglog(), {-5.0, 5.0});
    const auto fine = find_breakpoints(Model::cloglog(), {-5.0, 5.0}, 40960);
    REQUIRE(coarse.size() == fine.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) CHECK(std::abs(coarse[i].c - fine[i].c) <= 1e-8);
  }
  SUBCASE("typed subintervals between breakpoints") {
    CHECK(check_type(Model::cloglog(), {-3.0, 0.04}).verdict != Verdict::Neither);
    CHECK(check_type(Model::cloglog(), {0.5, 3.0}).verdict != Verdict::Neither);
  }
}

TEST_CASE("the Psi3'/Psi1' slope condition") {
  CHECK(check_condition_41(Model::logistic(), {0.0, 10.0}));
  CHECK(check_condition_41(Model::probit(), {0.0, 10.0}));
  CHECK(check_condition_41(Model::logistic(), {0.0, 1.0}));
  CHECK_FALSE(check_condition_41(Model::double_exponential(), {0.0, 10.0}));
  CHECK_FALSE(check_condition_41(Model::double_reciprocal(), {0.0, 10.0}));
  CHECK_THROWS_AS(check_condition_41(Model::logistic(), {-1.0, 1.0}), PreconditionError);
}

TEST_CASE("capping infinite ends") {
  const Model lg = Model::logistic();
  const Interval r = cap_interval(lg, {0.0, kInf});
  CHECK(r.lo == 0.0);
  CHECK(std::isfinite(r.hi));
  CHECK(lg.base(r.hi) < 1e-12 * lg.base(0.0));
  const Interval both = cap_interval(lg, {-kInf, kInf});
  CHECK(both.lo == -both.hi);
  const Interval p = cap_interval(Model::poisson_loglinear(), {-kInf, 0.0});
  CHECK(p.hi == 0.0);
  CHECK(std::isfinite(p.lo));
  const Classification c = check_type(lg, {0.0, kInf});
  CHECK(c.verdict == Verdict::TypeI);
  CHECK(c.tested.finite());
}

TEST_CASE("bad intervals") {
  CHECK_THROWS_AS(check_type(Model::logistic(), {2.0, 1.0}), PreconditionError);
}
