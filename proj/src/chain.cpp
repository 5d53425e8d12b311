#include "thetacf/chain.hpp"

#include "thetacf/errors.hpp"
#include "thetacf/rng.hpp"

namespace thetacf {

namespace {

void require_state(const Real& s, const ThetaContext& ctx, const char* what) {
  if (!(s >= 0) || s > ctx.theta_upper_r()) {
    throw DomainError(std::string(what) + ": state " + format_real(s, 20) + " outside [0, theta]");
  }
}

void require_digit(std::int64_t i, const ThetaContext& ctx) {
  if (i < ctx.m()) throw DomainError("digit " + std::to_string(i) + " below m = " + std::to_string(ctx.m()));
}

// Digits past this bound would lose integer exactness in binary128 sums
// long before they overflow; treat them as a numeric failure.
constexpr double kDigitCeiling = 4.0e18;

}  // namespace

Real transition_prob(std::int64_t i, const Real& s, const ThetaContext& ctx) {
  require_digit(i, ctx);
  require_state(s, ctx, "transition_prob");
  const Real& theta = ctx.theta_r();
  const Real r = Real(i);
  return (s * theta + 1) / ((s + r * theta) * (s + (r + 1) * theta));
}

Real transition_partial_sum(const Real& s, std::int64_t last, const ThetaContext& ctx) {
  require_state(s, ctx, "transition_partial_sum");
  if (last < ctx.m()) return 0;
  const Real& theta = ctx.theta_r();
  return 1 - (s * theta + 1) / (theta * (s + (Real(last) + 1) * theta));
}

Real u_map(std::int64_t i, const Real& s, const ThetaContext& ctx) {
  require_digit(i, ctx);
  require_state(s, ctx, "u_map");
  return 1 / (s + Real(i) * ctx.theta_r());
}

template <class Exact>
Exact u_map(const BigInt& i, const Exact& s, const ThetaContext& ctx) {
  if (i < ctx.m()) throw DomainError("digit " + i.get_str() + " below m");
  if (s.sign() < 0 || s > Exact(ctx.theta())) throw DomainError("u_map: state outside [0, theta]");
  return (s + Exact(ctx.theta() * SurdNumber(Rational(i)))).inverse();
}

Real bbl_conditional_cdf(const Real& s, const Real& x, const ThetaContext& ctx) {
  require_state(s, ctx, "bbl_conditional_cdf");
  require_state(x, ctx, "bbl_conditional_cdf");
  const Real& theta = ctx.theta_r();
  return (s * theta + 1) * x / (theta * (s * x + 1));
}

Real digit_law(std::int64_t i, const ThetaContext& ctx) {
  require_digit(i, ctx);
  const Real r = Real(i);
  return Real(ctx.m()) / (r * (r + 1));
}

std::int64_t sample_digit(const Real& s, const Real& u, const ThetaContext& ctx) {
  require_state(s, ctx, "sample_digit");
  if (!(u >= 0) || !(u < 1)) throw DomainError("sample_digit: uniform draw outside [0, 1)");
  const Real& theta = ctx.theta_r();
  const Real y = ((s * theta + 1) / (theta * (1 - u)) - s) / theta;
  if (!(y < kDigitCeiling)) throw NumericError("sample_digit: digit beyond representable range");
  std::int64_t M = static_cast<std::int64_t>(floor(y).convert_to<long long>());
  if (M < ctx.m()) M = ctx.m();
  while (M > ctx.m() && transition_partial_sum(s, M - 1, ctx) > u) --M;
  while (!(transition_partial_sum(s, M, ctx) > u)) ++M;
  return M;
}

ChainTrajectory simulate_chain(const Real& a, std::size_t steps, const UniformSource& uniform,
                               const ThetaContext& ctx, const ChainOptions& options) {
  require_state(a, ctx, "simulate_chain");
  if (options.force_digit) require_digit(*options.force_digit, ctx);
  ChainTrajectory out;
  out.start = a;
  out.states.reserve(steps + 1);
  out.digits.reserve(steps);
  out.states.push_back(a);
  Real s = a;
  for (std::size_t k = 0; k < steps; ++k) {
    const Real draw = uniform();
    std::int64_t digit = sample_digit(s, draw, ctx);
    if (options.force_digit) digit = *options.force_digit;
    s = 1 / (s + Real(digit) * ctx.theta_r());
    if (s > ctx.theta_r()) s = ctx.theta_r();
    out.digits.push_back(digit);
    out.states.push_back(s);
  }
  return out;
}

ChainTrajectory simulate_chain(const Real& a, std::size_t steps, std::uint64_t seed, const ThetaContext& ctx,
                               const ChainOptions& options) {
  CounterRng rng(seed, 0);
  return simulate_chain(a, steps, [&rng] { return rng.uniform(); }, ctx, options);
}

template <class Exact>
std::vector<Exact> chain_states(const Exact& a, const DigitSequence& digits, const ThetaContext& ctx) {
  std::vector<Exact> out;
  out.reserve(digits.size() + 1);
  out.push_back(a);
  for (const auto& d : digits.digits) out.push_back(u_map(d, out.back(), ctx));
  return out;
}

SurdNumber s_from_digits(const DigitSequence& digits, const ThetaContext& ctx) {
  if (digits.empty()) throw DomainError("s_from_digits: empty digit sequence");
  SurdNumber v(0L);
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits.digits[k] < ctx.m()) throw DomainError("digit below m");
    v = (ctx.theta() * SurdNumber(Rational(digits.digits[k])) + v).inverse();
  }
  return v;
}

TowerNumber rscc_fixed_point(const ThetaContext& ctx) {
  const std::int64_t m = ctx.m();
  // 1/(2θ) = √m/2 and √(1+4θ²) = √(m(m+4))/m.
  const SurdNumber half_root_m(Rational(0), Rational(1, 2), m);
  const SurdNumber coef(Rational(0), Rational(1, 2 * m), m);
  return TowerNumber(-half_root_m, coef, m * (m + 4));
}

Real rscc_fixed_point_real(const ThetaContext& ctx) {
  const Real& theta = ctx.theta_r();
  // Rationalized: 2θ / (1 + √(1+4θ²)).
  return 2 * theta / (1 + sqrt(1 + 4 * theta * theta));
}

template SurdNumber u_map(const BigInt&, const SurdNumber&, const ThetaContext&);
template TowerNumber u_map(const BigInt&, const TowerNumber&, const ThetaContext&);
template std::vector<SurdNumber> chain_states(const SurdNumber&, const DigitSequence&, const ThetaContext&);
template std::vector<TowerNumber> chain_states(const TowerNumber&, const DigitSequence&, const ThetaContext&);

}  // namespace thetacf
