#pragma once

#include "thetacf/context.hpp"
#include "thetacf/expansion.hpp"
#include "thetacf/real.hpp"
#include "thetacf/surd.hpp"
#include "thetacf/tower.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace thetacf {

/// P_i(s) = (sθ+1) / ((s+iθ)(s+(i+1)θ)).
Real transition_prob(std::int64_t i, const Real& s, const ThetaContext& ctx);

/// Σ_{i=m}^{M} P_i(s) = 1 − (sθ+1)/(θ(s+(M+1)θ)).
Real transition_partial_sum(const Real& s, std::int64_t last, const ThetaContext& ctx);

/// u_i(s) = 1/(s + iθ).
Real u_map(std::int64_t i, const Real& s, const ThetaContext& ctx);
template <class Exact>
Exact u_map(const BigInt& i, const Exact& s, const ThetaContext& ctx);

/// (s_nθ+1)x / (θ(s_n x+1)).
Real bbl_conditional_cdf(const Real& s, const Real& x, const ThetaContext& ctx);

/// m / (i(i+1)).
Real digit_law(std::int64_t i, const ThetaContext& ctx);

/// Smallest M ≥ m with Σ_{i=m}^{M} P_i(s) > u, by inverting the partial
/// sum and correcting by single steps.
std::int64_t sample_digit(const Real& s, const Real& u, const ThetaContext& ctx);

struct ChainTrajectory {
  Real start;
  /// states[0] = start, states[k] = u_{digits[k−1]}(states[k−1]).
  std::vector<Real> states;
  std::vector<std::int64_t> digits;
};

using UniformSource = std::function<Real()>;

struct ChainOptions {
  /// Replace every sampled digit by this value (the random stream is still
  /// consumed so forced and free runs stay aligned).
  std::optional<std::int64_t> force_digit;
};

ChainTrajectory simulate_chain(const Real& a, std::size_t steps, std::uint64_t seed, const ThetaContext& ctx,
                               const ChainOptions& options = {});
ChainTrajectory simulate_chain(const Real& a, std::size_t steps, const UniformSource& uniform,
                               const ThetaContext& ctx, const ChainOptions& options = {});

/// Exact states s_k = u_{d_k}(s_{k−1}) along a prescribed digit path.
template <class Exact>
std::vector<Exact> chain_states(const Exact& a, const DigitSequence& digits, const ThetaContext& ctx);

/// [a_nθ, a_{n−1}θ, …, a_1θ] evaluated from the innermost term outwards.
SurdNumber s_from_digits(const DigitSequence& digits, const ThetaContext& ctx);

/// s* = (−1 + √(1+4θ²))/(2θ), the fixed point of u_m. It lies in
/// Q(√m, √(m(m+4))), hence the tower type.
TowerNumber rscc_fixed_point(const ThetaContext& ctx);
Real rscc_fixed_point_real(const ThetaContext& ctx);

extern template SurdNumber u_map(const BigInt&, const SurdNumber&, const ThetaContext&);
extern template TowerNumber u_map(const BigInt&, const TowerNumber&, const ThetaContext&);
extern template std::vector<SurdNumber> chain_states(const SurdNumber&, const DigitSequence&, const ThetaContext&);
extern template std::vector<TowerNumber> chain_states(const TowerNumber&, const DigitSequence&, const ThetaContext&);

}  // namespace thetacf
