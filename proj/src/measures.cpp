#include "thetacf/measures.hpp"

#include "thetacf/errors.hpp"

#include <cmath>

namespace thetacf {

namespace {

void require_unit(const Real& x, const ThetaContext& ctx, const char* what) {
  if (!(x >= 0) || x > ctx.theta_upper_r()) {
    throw DomainError(std::string(what) + ": " + format_real(x, 20) + " outside [0, theta]");
  }
}

void require_probability(const Real& u, const char* what) {
  if (!(u >= 0) || u > 1) throw DomainError(std::string(what) + ": " + format_real(u, 20) + " outside [0, 1]");
}

}  // namespace

MeasureKind parse_measure(const std::string& text, const ThetaContext& ctx) {
  if (text == "lebesgue") return LebesgueMeasure{};
  if (text == "gamma") return GammaMeasure{};
  const std::string prefix = "gamma-a:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string arg = text.substr(prefix.size());
    Real a;
    if (arg == "theta") {
      a = ctx.theta_r();
    } else if (arg == "theta/2") {
      a = ctx.theta_r() / 2;
    } else {
      try {
        a = parse_real(arg);
      } catch (const std::exception&) {
        throw ValidationError("bad gamma-a parameter '" + arg + "'");
      }
    }
    if (!(a >= 0) || a > ctx.theta_r()) throw ValidationError("gamma-a parameter must lie in [0, theta]");
    return GammaAMeasure{a};
  }
  throw ValidationError("unknown measure '" + text + "' (expected lebesgue, gamma or gamma-a:<a>)");
}

std::string measure_name(const MeasureKind& mu) {
  struct Visitor {
    std::string operator()(const LebesgueMeasure&) const { return "lebesgue"; }
    std::string operator()(const GammaMeasure&) const { return "gamma"; }
    std::string operator()(const GammaAMeasure& g) const { return "gamma-a:" + format_real(g.a, 36); }
    std::string operator()(const CustomDensity& c) const { return "custom:" + std::to_string(c.density.size()); }
  };
  return std::visit(Visitor{}, mu);
}

Real gamma_cdf(const Real& x, const ThetaContext& ctx) {
  require_unit(x, ctx, "gamma_cdf");
  return log1p(ctx.theta_r() * x) / ctx.log_norm_r();
}

Real gamma_density(const Real& x, const ThetaContext& ctx) {
  require_unit(x, ctx, "gamma_density");
  return ctx.theta_r() / ((1 + ctx.theta_r() * x) * ctx.log_norm_r());
}

Real gamma_inverse_cdf(const Real& u, const ThetaContext& ctx) {
  require_probability(u, "gamma_inverse_cdf");
  const Real x = expm1(ctx.log_norm_r() * u) / ctx.theta_r();
  return x > ctx.theta_r() ? ctx.theta_r() : x;
}

Real gamma_a_cdf(const Real& x, const Real& a, const ThetaContext& ctx) {
  require_unit(x, ctx, "gamma_a_cdf");
  require_unit(a, ctx, "gamma_a_cdf parameter");
  const Real& theta = ctx.theta_r();
  return (a * theta + 1) * x / ((a * x + 1) * theta);
}

Real gamma_a_inverse_cdf(const Real& u, const Real& a, const ThetaContext& ctx) {
  require_probability(u, "gamma_a_inverse_cdf");
  require_unit(a, ctx, "gamma_a_inverse_cdf parameter");
  const Real& theta = ctx.theta_r();
  // u(aθ+1 − uaθ)⁻¹·θ solves (aθ+1)x = uθ(ax+1).
  const Real x = u * theta / (a * theta + 1 - u * theta * a);
  return x > theta ? theta : x;
}

Real measure_cdf(const MeasureKind& mu, const Real& x, const ThetaContext& ctx) {
  require_unit(x, ctx, "measure_cdf");
  struct Visitor {
    const Real& x;
    const ThetaContext& ctx;
    Real operator()(const LebesgueMeasure&) const { return x / ctx.theta_r(); }
    Real operator()(const GammaMeasure&) const { return gamma_cdf(x, ctx); }
    Real operator()(const GammaAMeasure& g) const { return gamma_a_cdf(x, g.a, ctx); }
    Real operator()(const CustomDensity& c) const {
      return c.density.integrate_lebesgue(x, ctx) / c.density.integrate_lebesgue(ctx);
    }
  };
  return std::visit(Visitor{x, ctx}, mu);
}

Real measure_density(const MeasureKind& mu, const Real& x, const ThetaContext& ctx) {
  require_unit(x, ctx, "measure_density");
  struct Visitor {
    const Real& x;
    const ThetaContext& ctx;
    Real operator()(const LebesgueMeasure&) const { return 1; }
    Real operator()(const GammaMeasure&) const { return gamma_density(x, ctx) * ctx.theta_r(); }
    Real operator()(const GammaAMeasure& g) const {
      const Real d = g.a * x + 1;
      return (g.a * ctx.theta_r() + 1) / (d * d);
    }
    Real operator()(const CustomDensity& c) const {
      return c.density.eval(x) / c.density.integrate_lebesgue(ctx);
    }
  };
  return std::visit(Visitor{x, ctx}, mu);
}

Real extended_rectangle(const Real& a, const Real& b, const Real& c, const Real& d, const ThetaContext& ctx) {
  for (const Real* v : {&a, &b, &c, &d}) require_unit(*v, ctx, "extended_rectangle");
  if (a > b || c > d) throw DomainError("extended_rectangle: endpoints out of order");
  if (a == b || c == d) return 0;
  // (ac+1)(bd+1) / ((ad+1)(bc+1)) = 1 + (b−a)(d−c)/((ad+1)(bc+1)).
  const Real excess = (b - a) * (d - c) / ((a * d + 1) * (b * c + 1));
  return log1p(excess) / ctx.log_norm_r();
}

Real gauss_kuzmin_limit(const Real& x, const ThetaContext& ctx) {
  require_unit(x, ctx, "gauss_kuzmin_limit");
  return log((ctx.m_theta_r() + x) * ctx.theta_r()) / ctx.log_norm_r();
}

Real stationary_digit_law(std::int64_t i, const ThetaContext& ctx) {
  if (i < ctx.m()) throw DomainError("digit below m");
  const Real r = Real(i);
  // (i+1)²/(i(i+2)) = 1 + 1/(i(i+2)).
  return log1p(1 / (r * (r + 2))) / ctx.log_norm_r();
}

Real invariance_check(const Real& x, const Real& tail_eps, const ThetaContext& ctx, std::size_t max_terms) {
  require_unit(x, ctx, "invariance_check");
  if (!(tail_eps > 0)) throw ValidationError("tail_eps must be positive");
  if (x == 0) return 0;
  const Real& theta = ctx.theta_r();
  const Real& L = ctx.log_norm_r();
  const Real z = x / theta;
  Real sum = 0;
  std::int64_t i = ctx.m();
  for (std::size_t used = 0;; ++used, ++i) {
    const Real remainder = log1p(z / Real(i)) / L;
    if (remainder < tail_eps || used >= max_terms) {
      sum += remainder;
      break;
    }
    // γ_θ((1/(x+iθ), 1/(iθ)]) = [log(1 + 1/i) − log(1 + 1/(z+i))]/L.
    const Real r = Real(i);
    sum += (log1p(1 / r) - log1p(1 / (z + r))) / L;
  }
  return fabs(sum - gamma_cdf(x, ctx));
}

}  // namespace thetacf
