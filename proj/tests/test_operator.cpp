#include "doctest.h"

#include "thetacf/chain.hpp"
#include "thetacf/errors.hpp"
#include "thetacf/measures.hpp"
#include "thetacf/transfer_operator.hpp"

#include <boost/math/special_functions/trigamma.hpp>

#include <cmath>

using namespace thetacf;

namespace {

double d(const Real& x) { return x.convert_to<double>(); }

OperatorConfig small_config(std::size_t n) {
  OperatorConfig cfg;
  cfg.grid_size = n;
  return cfg;
}

}  // namespace

TEST_CASE("trigamma tail") {
  // Σ_{i≥m} 1/(x+iθ)² = θ⁻²·ψ₁(x/θ + m); values from an independent
  // 30-digit evaluation.
  struct Case {
    std::int64_t m;
    Real x;
    double expected;
  };
  const ThetaContext c1(1), c2(2);
  const Case cases[] = {
      {1, Real(0), 1.644934066848226436},
      {1, Real(1) / 3, 1.095597125427094082},
      {1, Real(1), 0.644934066848226436},
      {2, Real(0), 1.289868133696452873},
      {2, c2.theta_r() / 3, 1.066194250854188164},
      {2, c2.theta_r(), 0.789868133696452873},
  };
  for (const auto& c : cases) {
    const ThetaContext& ctx = c.m == 1 ? c1 : c2;
    const Real z = c.x / ctx.theta_r() + c.m;
    const Real psi1 = trigamma_tail(z, Real("1e-30")) + 1 / z;
    CHECK(d(psi1 / (ctx.theta_r() * ctx.theta_r())) == doctest::Approx(c.expected).epsilon(1e-15));
  }
  for (double z : {0.25, 1.0, 3.5, 39.0, 40.0, 41.0, 200.0, 1e5}) {
    const double ref = boost::math::trigamma(z) - 1 / z;
    CHECK(d(trigamma_tail(Real(z), Real("1e-30"))) == doctest::Approx(ref).epsilon(1e-13));
  }
  CHECK_THROWS_AS(trigamma_tail(Real(0), Real("1e-12")), DomainError);
}

TEST_CASE("operator fixes constants") {
  for (std::int64_t m : {1, 2, 3, 5}) {
    const ThetaContext ctx(m);
    const TransferOperator op(ctx, small_config(257));
    CHECK(d(op.row_sum_defect()) < 1e-30);
    const GridFunction one = GridFunction::constant(op.nodes(), Real(1));
    const GridFunction u1 = op.apply(one);
    CHECK(d((u1 - one).sup_norm()) < 1e-30);
    CHECK(op.nonzeros() < 257 * 257);
  }
}

TEST_CASE("operator on the identity function") {
  // Uf(0) for f(x) = x is θ⁻³Σ_{i≥m} 1/(i²(i+1)).
  const double expected[] = {0.644934066848226436472, 0.409935445973301209700, 0.320086800693917413116};
  for (std::int64_t m = 1; m <= 3; ++m) {
    const ThetaContext ctx(m);
    const TransferOperator op(ctx, small_config(513));
    const GridFunction f = GridFunction::sample(op.nodes(), [](const Real& x) { return x; });
    const GridFunction g = op.apply(f);
    CHECK(d(g[0]) == doctest::Approx(expected[m - 1]).epsilon(1e-11));
  }
  // m = 1, x = 1: 2Σ_{k≥2} 1/(k²(k+1)) = π²/3 − 3.
  const ThetaContext c1(1);
  const TransferOperator op(c1, small_config(513));
  const GridFunction g = op.apply(GridFunction::sample(op.nodes(), [](const Real& x) { return x; }));
  CHECK(d(g[512]) == doctest::Approx(0.289868133696452873).epsilon(1e-11));
}

TEST_CASE("operator agrees with the branch series on a smooth function") {
  const ThetaContext ctx(2);
  const TransferOperator op(ctx, small_config(1025));
  auto f = [](const Real& x) { return exp(-x); };
  const GridFunction g = op.apply(GridFunction::sample(op.nodes(), f));
  for (std::size_t k : {std::size_t(0), std::size_t(300), std::size_t(1024)}) {
    const Real x = op.nodes()[k];
    Real series = 0;
    const std::int64_t last = 20000;
    for (std::int64_t i = ctx.m(); i <= last; ++i) {
      const Real u = 1 / (x + Real(i) * ctx.theta_r());
      series += (x * ctx.theta_r() + 1) * u * (1 / (x + Real(i + 1) * ctx.theta_r())) * f(u);
    }
    // Remaining branches sit near u = 0 where f ≈ 1.
    series += 1 - transition_partial_sum(x, last, ctx);
    CHECK(d(fabs(g[k] - series)) < 1e-6);
  }
}

TEST_CASE("invariant density is fixed by the density operator") {
  for (std::int64_t m : {1, 2, 3}) {
    const ThetaContext ctx(m);
    const OperatorConfig cfg = small_config(257);
    const GridFunction rho = invariant_density(ctx, cfg);
    CHECK(d(rho.integrate_lebesgue(ctx) * ctx.theta_r()) == doctest::Approx(1.0).epsilon(1e-6));
    const GridFunction p_rho = transfer_density(rho, cfg, ctx);
    CHECK(d((p_rho - rho).sup_norm()) < 1e-28);
    // Direct collocation of Σ u_i² g(u_i) converges like h².
    const GridFunction direct = transfer_density_direct(rho, 4000, ctx);
    CHECK(d((direct - rho).sup_norm()) < 2e-5);
  }
}

TEST_CASE("direct density collocation is second order") {
  const ThetaContext ctx(1);
  Real previous = 0;
  for (std::size_t n : {65, 129, 257}) {
    const GridFunction rho = invariant_density(ctx, small_config(n));
    const Real err = (transfer_density_direct(rho, 4000, ctx) - rho).sup_norm();
    if (previous > 0) CHECK(d(previous / err) > 3.0);
    previous = err;
  }
}

TEST_CASE("stationary weights and ergodic limit") {
  const ThetaContext ctx(2);
  const TransferOperator op(ctx, small_config(513));
  const auto& pi = op.stationary_weights();
  Real total = 0;
  for (const auto& w : pi) {
    CHECK(w >= 0);
    total += w;
  }
  CHECK(d(fabs(total - 1)) < 1e-30);
  const GridFunction c = GridFunction::constant(op.nodes(), Real(3));
  CHECK(d(op.ergodic_limit(c)) == doctest::Approx(3.0).epsilon(1e-28));
  const GridFunction f = GridFunction::sample(op.nodes(), [](const Real& x) { return x * x; });
  CHECK(d(fabs(op.ergodic_limit(f) - f.integrate_gamma(ctx))) < 1e-5);
  // π is a left fixed vector: π·(Uf) = π·f.
  CHECK(d(fabs(op.ergodic_limit(op.apply(f)) - op.ergodic_limit(f))) < 1e-30);
}

TEST_CASE("pushforward of normalized Lebesgue measure") {
  const ThetaContext ctx(1);
  const TransferOperator op(ctx, small_config(1025));
  const GridFunction h = GridFunction::constant(op.nodes(), Real(1));
  const auto n0 = pushforward_cdf(op, h, 0, {Real("0.5"), Real(1)}, ctx);
  CHECK(d(n0[0]) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d(n0[1]) == doctest::Approx(1.0).epsilon(1e-12));
  // λ(T⁻¹[0, 1/2)) = Σ 1/(i(2i+1)) = 2 − 2 log 2. Uf is interpolated
  // linearly before integration, so agreement is O(h²).
  const auto n1 = pushforward_cdf(op, h, 1, {Real("0.5"), Real(1)}, ctx);
  CHECK(std::abs(d(n1[0]) - (2 - 2 * std::log(2.0))) < 2e-7);
  CHECK(std::abs(d(n1[1]) - 1) < 2e-7);
  // Converges to the Gauss measure.
  const auto n12 = pushforward_cdf(op, h, 12, {Real("0.5")}, ctx);
  CHECK(d(fabs(n12[0] - gamma_cdf(Real("0.5"), ctx))) < 1e-5);
  const GridFunction unnormalized = GridFunction::constant(op.nodes(), Real(2));
  CHECK_THROWS_AS(density_to_gamma_relative(unnormalized, ctx), ValidationError);
}

TEST_CASE("decay rate for m = 1 approaches the Wirsing constant") {
  const ThetaContext ctx(1);
  const TransferOperator op(ctx, small_config(1025));
  const GridFunction h = GridFunction::constant(op.nodes(), Real(1));
  const DecayEstimate est = estimate_decay_rate(op, h, 25, NormKind::sup, ctx);
  CHECK(d(est.q_hat) == doctest::Approx(0.3036630029).epsilon(0.02));
  CHECK(est.fitted_points >= 2);
  for (std::size_t k = 1; k < est.residuals.size(); ++k) CHECK(est.residuals[k] < est.residuals[k - 1]);
  CHECK(d(fabs(est.limit - est.continuum_limit)) < 1e-5);
  CHECK_THROWS_AS(estimate_decay_rate(op, h, 3, NormKind::sup, ctx), ValidationError);
}

TEST_CASE("gamma_a starts decay below one for larger m") {
  for (std::int64_t m : {2, 3}) {
    const ThetaContext ctx(m);
    const TransferOperator op(ctx, small_config(513));
    const Real a = ctx.theta_r() / 2;
    const GridFunction h = GridFunction::sample(op.nodes(), [&](const Real& x) {
      return measure_density(GammaAMeasure{a}, x, ctx);
    });
    const DecayEstimate est = estimate_decay_rate(op, h, 20, NormKind::lipschitz, ctx);
    CHECK(est.q_hat > 0);
    CHECK(est.q_hat < 1);
  }
}

TEST_CASE("norms and configuration") {
  const ThetaContext ctx(1);
  const auto nodes = GridFunction::uniform_nodes(11, ctx);
  const GridFunction f = GridFunction::sample(nodes, [](const Real& x) { return 2 * x - 1; });
  CHECK(d(grid_norm(f, NormKind::sup)) == doctest::Approx(1.0));
  CHECK(d(grid_norm(f, NormKind::lipschitz)) == doctest::Approx(3.0));
  CHECK(parse_norm("lipschitz") == NormKind::lipschitz);
  CHECK(norm_name(NormKind::sup) == "sup");
  CHECK_THROWS_AS(parse_norm("l2"), ValidationError);
  OperatorConfig bad;
  bad.grid_size = 1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad.grid_size = 16;
  bad.tail_eps = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  const TransferOperator op(ctx, small_config(17));
  const GridFunction other(GridFunction::uniform_nodes(9, ctx), std::vector<Real>(9, Real(1)));
  CHECK_THROWS_AS(op.apply(other), ValidationError);
}
