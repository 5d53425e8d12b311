#include "doctest.h"

#include "thetacf/errors.hpp"
#include "thetacf/measures.hpp"

using namespace thetacf;

namespace {

double d(const Real& x) { return x.convert_to<double>(); }

}  // namespace

TEST_CASE("gamma cdf values") {
  const ThetaContext c1(1), c2(2);
  CHECK(gamma_cdf(Real(0), c1) == 0);
  CHECK(d(gamma_cdf(c2.theta_r(), c2)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d(gamma_cdf(Real("0.5"), c1)) == doctest::Approx(0.58496250072115618145).epsilon(1e-15));
  CHECK(d(gamma_cdf(Real("0.5"), c2)) == doctest::Approx(0.74663212582239998861).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_cdf(Real("1.01"), c1), DomainError);
  CHECK_THROWS_AS(gamma_cdf(Real(-1) / 100, c1), DomainError);
}

TEST_CASE("gamma_a cdf values") {
  const ThetaContext c1(1), c3(3);
  const Real x = c3.theta_r() / 3;
  CHECK(d(gamma_a_cdf(x, Real(0), c3)) == doctest::Approx(1.0 / 3.0));
  CHECK(d(gamma_a_cdf(c3.theta_r(), c3.theta_r() / 2, c3)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d(gamma_a_cdf(Real("0.5"), Real(1), c1)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("cdfs are monotone and normalized") {
  for (std::int64_t m : {1, 2, 5}) {
    const ThetaContext ctx(m);
    const Real theta = ctx.theta_r();
    for (int ai = 0; ai < 100; ++ai) {
      const Real a = theta * ai / 99;
      Real prev = -1;
      for (int j = 0; j <= 50; ++j) {
        const Real x = theta * j / 50;
        const Real v = gamma_a_cdf(x, a, ctx);
        CHECK(v >= prev);
        prev = v;
      }
      CHECK(d(prev) == doctest::Approx(1.0).epsilon(1e-14));
    }
    Real prev = -1;
    for (int j = 0; j <= 200; ++j) {
      const Real v = gamma_cdf(theta * j / 200, ctx);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("inverse cdfs invert") {
  const ThetaContext ctx(3);
  for (int k = 0; k <= 20; ++k) {
    const Real u = Real(k) / 20;
    CHECK(d(fabs(gamma_cdf(gamma_inverse_cdf(u, ctx), ctx) - u)) < 1e-30);
    const Real a = ctx.theta_r() / 2;
    CHECK(d(fabs(gamma_a_cdf(gamma_a_inverse_cdf(u, a, ctx), a, ctx) - u)) < 1e-30);
  }
}

TEST_CASE("extended rectangle measure") {
  for (std::int64_t m : {1, 2, 4}) {
    const ThetaContext ctx(m);
    const Real t = ctx.theta_r();
    CHECK(d(extended_rectangle(Real(0), t, Real(0), t, ctx)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(extended_rectangle(t / 5, t / 2, t / 3, t / 3, ctx) == 0);
    for (int j = 0; j <= 20; ++j) {
      const Real x = t * j / 20;
      CHECK(d(fabs(extended_rectangle(Real(0), x, Real(0), t, ctx) - gamma_cdf(x, ctx))) < 1e-30);
    }
    // Finite additivity under a horizontal and a vertical cut.
    const Real a = t / 7, b = t * 5 / 6, c = t / 9, dd = t * 2 / 3, cut = t / 2;
    const Real whole = extended_rectangle(a, b, c, dd, ctx);
    const Real split_h = extended_rectangle(a, cut, c, dd, ctx) + extended_rectangle(cut, b, c, dd, ctx);
    const Real split_v = extended_rectangle(a, b, c, cut, ctx) + extended_rectangle(a, b, cut, dd, ctx);
    CHECK(d(fabs(whole - split_h)) < 1e-30);
    CHECK(d(fabs(whole - split_v)) < 1e-30);
    CHECK_THROWS_AS(extended_rectangle(b, a, c, dd, ctx), DomainError);
  }
}

TEST_CASE("invariance residuals") {
  const ThetaContext c1(1);
  CHECK(invariance_check(Real(0), Real("1e-12"), c1) == 0);
  CHECK(d(invariance_check(c1.theta_r(), Real("1e-12"), c1)) <= 1e-12);
  CHECK(d(invariance_check(Real("0.5"), Real("1e-14"), c1)) <= 1e-12);
  for (std::int64_t m : {1, 2, 3, 5}) {
    const ThetaContext ctx(m);
    const Real eps("1e-12");
    for (int j = 0; j < 100; ++j) {
      const Real x = ctx.theta_r() * j / 99;
      CHECK(d(invariance_check(x, eps, ctx, 512)) < 10 * 1e-12);
    }
  }
}

TEST_CASE("truncated preimage sums miss a logarithmic tail") {
  // Partial sums over i = m … I fall short of γ_θ([0,x)) by log(1 + x/(θ(I+1)))/L.
  const ThetaContext ctx(2);
  const Real x = ctx.theta_r() / 3;
  Real partial = 0;
  const int terms = 200;
  for (int i = 2; i < 2 + terms; ++i) {
    partial += gamma_cdf(1 / (Real(i) * ctx.theta_r()), ctx) -
               gamma_cdf(1 / (x + Real(i) * ctx.theta_r()), ctx);
  }
  const Real gap = gamma_cdf(x, ctx) - partial;
  const Real predicted = log1p(x / ctx.theta_r() / Real(2 + terms)) / ctx.log_norm_r();
  CHECK(d(fabs(gap - predicted)) < 1e-28);
}

TEST_CASE("gauss-kuzmin limit equals gamma cdf") {
  for (std::int64_t m : {1, 2, 3, 6}) {
    const ThetaContext ctx(m);
    for (int j = 0; j <= 64; ++j) {
      const Real x = ctx.theta_r() * j / 64;
      CHECK(d(fabs(gauss_kuzmin_limit(x, ctx) - gamma_cdf(x, ctx))) < 1e-32);
    }
  }
}

TEST_CASE("stationary digit law") {
  const ThetaContext c1(1);
  CHECK(d(stationary_digit_law(1, c1)) == doctest::Approx(0.41503749927884381855).epsilon(1e-15));
  for (std::int64_t m : {1, 3}) {
    const ThetaContext ctx(m);
    Real total = 0;
    for (std::int64_t i = m; i < m + 5000; ++i) total += stationary_digit_law(i, ctx);
    // Σ_{i≥M} log(1 + 1/(i(i+2))) = log((M+1)/M) telescopes.
    const Real tail = log1p(Real(1) / Real(m + 5000)) / ctx.log_norm_r();
    CHECK(d(fabs(total + tail - 1)) < 1e-28);
  }
}

TEST_CASE("measure parsing") {
  const ThetaContext c2(2);
  CHECK(std::holds_alternative<LebesgueMeasure>(parse_measure("lebesgue", c2)));
  CHECK(std::holds_alternative<GammaMeasure>(parse_measure("gamma", c2)));
  const auto half = parse_measure("gamma-a:theta/2", c2);
  REQUIRE(std::holds_alternative<GammaAMeasure>(half));
  CHECK(std::get<GammaAMeasure>(half).a == c2.theta_r() / 2);
  CHECK(std::get<GammaAMeasure>(parse_measure("gamma-a:0.25", c2)).a == Real("0.25"));
  CHECK_THROWS_AS(parse_measure("gamma-a:0.9", c2), ValidationError);
  CHECK_THROWS_AS(parse_measure("cauchy", c2), ValidationError);
  // γ_{θ,0} and λ_θ agree.
  const MeasureKind zero = GammaAMeasure{Real(0)};
  for (int j = 0; j <= 10; ++j) {
    const Real x = c2.theta_r() * j / 10;
    CHECK(d(fabs(measure_cdf(zero, x, c2) - measure_cdf(LebesgueMeasure{}, x, c2))) < 1e-32);
  }
}

TEST_CASE("densities integrate to their cdfs") {
  const ThetaContext ctx(2);
  const auto nodes = GridFunction::uniform_nodes(4001, ctx);
  for (const MeasureKind& mu : {MeasureKind(GammaMeasure{}), MeasureKind(GammaAMeasure{ctx.theta_r() / 3})}) {
    const GridFunction dens = GridFunction::sample(nodes, [&](const Real& x) { return measure_density(mu, x, ctx); });
    for (int j = 1; j <= 4; ++j) {
      const Real x = ctx.theta_r() * j / 4;
      CHECK(d(fabs(dens.integrate_lebesgue(x, ctx) - measure_cdf(mu, x, ctx))) < 1e-7);
    }
  }
}
