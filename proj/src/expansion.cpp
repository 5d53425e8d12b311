#include "thetacf/expansion.hpp"

#include "thetacf/errors.hpp"

#include <algorithm>
#include <limits>

namespace thetacf {

namespace {

template <class Exact>
void require_unit_range(const Exact& x, const ThetaContext& ctx, const char* what) {
  if (x.sign() < 0 || x > Exact(ctx.theta())) {
    throw DomainError(std::string(what) + ": argument " + x.str() + " outside [0, theta]");
  }
}

void require_digits(const DigitSequence& digits, const ThetaContext& ctx) {
  for (const auto& d : digits.digits) {
    if (d < ctx.m()) throw DomainError("digit " + d.get_str() + " below m = " + std::to_string(ctx.m()));
  }
}

SurdNumber as_surd(const BigInt& k) { return SurdNumber(Rational(k)); }

}  // namespace

bool DigitSequence::ends_with_minimal_digit(std::int64_t m) const {
  return terminated && !digits.empty() && digits.back() == m;
}

DigitSequence DigitSequence::from(const std::vector<std::int64_t>& values, bool terminated) {
  DigitSequence out;
  out.digits.reserve(values.size());
  for (auto v : values) out.digits.emplace_back(static_cast<long>(v));
  out.terminated = terminated;
  return out;
}

template <class Exact>
Exact gauss_map(const Exact& x, const ThetaContext& ctx) {
  require_unit_range(x, ctx, "gauss_map");
  if (x.is_zero()) return Exact(0L);
  const Exact r = x.inverse();
  const BigInt k = floor(r * Exact(ctx.m_theta()));
  return r - Exact(ctx.theta() * as_surd(k));
}

template <class Exact>
std::optional<BigInt> first_digit(const Exact& x, const ThetaContext& ctx) {
  require_unit_range(x, ctx, "first_digit");
  if (x.is_zero()) return std::nullopt;
  return floor(x.inverse() * Exact(ctx.m_theta()));
}

template <class Exact>
DigitSequence expand(const Exact& x, std::size_t n_max, const ThetaContext& ctx) {
  require_unit_range(x, ctx, "expand");
  DigitSequence out;
  Exact cur = x;
  const Exact m_theta(ctx.m_theta());
  const SurdNumber& theta = ctx.theta();
  while (out.digits.size() < n_max) {
    if (cur.is_zero()) {
      out.terminated = true;
      break;
    }
    const Exact r = cur.inverse();
    BigInt k = floor(r * m_theta);
    cur = r - Exact(theta * as_surd(k));
    out.digits.push_back(std::move(k));
  }
  if (!out.terminated && cur.is_zero()) out.terminated = true;
  return out;
}

template <class Exact>
Exact iterate_map(const Exact& x, std::size_t n, const ThetaContext& ctx) {
  Exact cur = x;
  for (std::size_t i = 0; i < n && !cur.is_zero(); ++i) cur = gauss_map(cur, ctx);
  return cur;
}

std::vector<ConvergentPair> convergents(const DigitSequence& digits, const ThetaContext& ctx) {
  require_digits(digits, ctx);
  std::vector<ConvergentPair> out;
  out.reserve(digits.size() + 1);
  SurdNumber p_prev(1L), p_cur(0L);
  SurdNumber q_prev(0L), q_cur(1L);
  out.push_back({p_cur, q_cur, 0});
  for (std::size_t n = 0; n < digits.size(); ++n) {
    const SurdNumber coef = ctx.theta() * as_surd(digits.digits[n]);
    SurdNumber p_next = coef * p_cur + p_prev;
    SurdNumber q_next = coef * q_cur + q_prev;
    p_prev = std::move(p_cur);
    q_prev = std::move(q_cur);
    p_cur = std::move(p_next);
    q_cur = std::move(q_next);
    out.push_back({p_cur, q_cur, n + 1});
  }
  return out;
}

template <class Exact>
Exact evaluate_cf(const DigitSequence& digits, const Exact& tail, const ThetaContext& ctx) {
  require_unit_range(tail, ctx, "evaluate_cf");
  const auto conv = convergents(digits, ctx);
  const std::size_t n = digits.size();
  const SurdNumber p_n = conv[n].p;
  const SurdNumber q_n = conv[n].q;
  const SurdNumber p_prev = n == 0 ? SurdNumber(1L) : conv[n - 1].p;
  const SurdNumber q_prev = n == 0 ? SurdNumber(0L) : conv[n - 1].q;
  return (Exact(p_n) + tail * Exact(p_prev)) / (Exact(q_n) + tail * Exact(q_prev));
}

std::pair<SurdNumber, SurdNumber> approx_error_bounds(const ConvergentPair& pair_n,
                                                      const ConvergentPair& pair_n1,
                                                      const ThetaContext& ctx) {
  if (pair_n1.index != pair_n.index + 1) throw DomainError("approx_error_bounds: convergents are not consecutive");
  const SurdNumber& q = pair_n.q;
  const SurdNumber& q1 = pair_n1.q;
  SurdNumber lower = (q * (q1 + ctx.theta() * q)).inverse();
  SurdNumber upper = (q * q1).inverse();
  return {std::move(lower), std::move(upper)};
}

FundamentalInterval fundamental_interval(const DigitSequence& digits, const ThetaContext& ctx) {
  if (digits.empty()) return {SurdNumber(0L), ctx.theta(), digits};
  const auto conv = convergents(digits, ctx);
  const std::size_t n = digits.size();
  const SurdNumber convergent = conv[n].p / conv[n].q;
  const SurdNumber other = (conv[n].p + ctx.theta() * conv[n - 1].p) / (conv[n].q + ctx.theta() * conv[n - 1].q);
  FundamentalInterval iv;
  iv.digits = digits;
  if (n % 2 == 1) {
    iv.lower = other;
    iv.upper = convergent;
  } else {
    iv.lower = convergent;
    iv.upper = other;
  }
  return iv;
}

SurdNumber interval_lebesgue(const FundamentalInterval& iv, const ThetaContext& ctx) {
  if (iv.digits.empty()) return SurdNumber(1L);
  const auto conv = convergents(iv.digits, ctx);
  const std::size_t n = iv.digits.size();
  return (conv[n].q * (conv[n].q + ctx.theta() * conv[n - 1].q)).inverse();
}

std::pair<BigInt, SurdNumber> split_integer_part(const SurdNumber& x, const ThetaContext& ctx) {
  if (x.sign() < 0) throw DomainError("split_integer_part: negative argument");
  const BigInt a0 = floor(x * ctx.m_theta());
  return {a0, x - ctx.theta() * as_surd(a0)};
}

RealStep gauss_step(const Real& x, const ThetaContext& ctx) {
  const Real& theta = ctx.theta_r();
  if (!(x >= 0) || x > ctx.theta_upper_r()) throw DomainError("gauss_step: argument outside [0, theta]");
  if (x == 0) return {Real(0), Real(0)};
  const Real r = 1 / std::min(x, theta);
  Real k = floor(r * ctx.m_theta_r());
  Real y = r - k * theta;
  // Remainders within rounding of 0 or θ are snapped to the half-open
  // convention y ∈ [0, θ): a value next to θ belongs to digit k + 1.
  const Real slack = 8 * r * std::numeric_limits<Real>::epsilon();
  if (y < 0) {
    k -= 1;
    y += theta;
  }
  if (y > theta - slack) {
    k += 1;
    y -= theta;
  }
  if (y < slack) y = 0;
  return {y, k};
}

Real gauss_map(const Real& x, const ThetaContext& ctx) { return gauss_step(x, ctx).next; }

template SurdNumber gauss_map(const SurdNumber&, const ThetaContext&);
template TowerNumber gauss_map(const TowerNumber&, const ThetaContext&);
template std::optional<BigInt> first_digit(const SurdNumber&, const ThetaContext&);
template std::optional<BigInt> first_digit(const TowerNumber&, const ThetaContext&);
template DigitSequence expand(const SurdNumber&, std::size_t, const ThetaContext&);
template DigitSequence expand(const TowerNumber&, std::size_t, const ThetaContext&);
template SurdNumber iterate_map(const SurdNumber&, std::size_t, const ThetaContext&);
template TowerNumber iterate_map(const TowerNumber&, std::size_t, const ThetaContext&);
template SurdNumber evaluate_cf(const DigitSequence&, const SurdNumber&, const ThetaContext&);
template TowerNumber evaluate_cf(const DigitSequence&, const TowerNumber&, const ThetaContext&);

}  // namespace thetacf
