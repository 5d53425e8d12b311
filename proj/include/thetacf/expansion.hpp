#pragma once

#include "thetacf/context.hpp"
#include "thetacf/rational.hpp"
#include "thetacf/real.hpp"
#include "thetacf/surd.hpp"
#include "thetacf/tower.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace thetacf {

/// Incomplete quotients a_1 … a_n of a θ-expansion.
struct DigitSequence {
  std::vector<BigInt> digits;
  /// True iff some iterate of the map hit exactly 0.
  bool terminated = false;

  std::size_t size() const { return digits.size(); }
  bool empty() const { return digits.empty(); }

  /// A finite expansion whose last digit is m (only x = θ·[…] cases such as
  /// x = θ itself). Recorded, not rejected.
  bool ends_with_minimal_digit(std::int64_t m) const;

  static DigitSequence from(const std::vector<std::int64_t>& values, bool terminated = false);
};

/// p_n and q_n of the n-th convergent, both in Z[θ].
struct ConvergentPair {
  SurdNumber p;
  SurdNumber q;
  std::size_t index = 0;
};

/// Open interval of points sharing a digit prefix.
struct FundamentalInterval {
  SurdNumber lower;
  SurdNumber upper;
  DigitSequence digits;
};

inline constexpr std::size_t kDefaultMaxDigits = 10000;

/// T_θ(x) = 1/x − θ⌊1/(xθ)⌋ with T_θ(0) = 0. Exact for SurdNumber and
/// TowerNumber; DomainError outside [0, θ].
template <class Exact>
Exact gauss_map(const Exact& x, const ThetaContext& ctx);

/// a_1(x) = ⌊1/(xθ)⌋; std::nullopt stands for the infinite digit of x = 0.
template <class Exact>
std::optional<BigInt> first_digit(const Exact& x, const ThetaContext& ctx);

/// Digits a_1 … a_k, k = n_max unless an iterate is exactly 0.
template <class Exact>
DigitSequence expand(const Exact& x, std::size_t n_max, const ThetaContext& ctx);

/// T_θⁿ(x), stopping at 0.
template <class Exact>
Exact iterate_map(const Exact& x, std::size_t n, const ThetaContext& ctx);

/// (p_n + t·p_{n−1}) / (q_n + t·q_{n−1}) for the digits' convergents.
template <class Exact>
Exact evaluate_cf(const DigitSequence& digits, const Exact& tail, const ThetaContext& ctx);

/// Convergents with indices 0 … n (seeds p_{−1}=1, p_0=0, q_{−1}=0, q_0=1).
std::vector<ConvergentPair> convergents(const DigitSequence& digits, const ThetaContext& ctx);

/// (1/(q_n(q_{n+1}+θq_n)), 1/(q_n q_{n+1})), the bracket for |x − p_n/q_n|.
std::pair<SurdNumber, SurdNumber> approx_error_bounds(const ConvergentPair& pair_n,
                                                      const ConvergentPair& pair_n1,
                                                      const ThetaContext& ctx);

FundamentalInterval fundamental_interval(const DigitSequence& digits, const ThetaContext& ctx);

/// Normalized Lebesgue measure (length/θ) of a fundamental interval.
SurdNumber interval_lebesgue(const FundamentalInterval& iv, const ThetaContext& ctx);

/// x > 0 written as a_0·θ + r with a_0 = ⌊x/θ⌋ and r ∈ [0, θ).
std::pair<BigInt, SurdNumber> split_integer_part(const SurdNumber& x, const ThetaContext& ctx);

/// One step of the map in binary128: next iterate and its digit. The
/// digit of 0 is reported as 0 and the iterate stays at 0.
struct RealStep {
  Real next;
  Real digit;
};
RealStep gauss_step(const Real& x, const ThetaContext& ctx);

Real gauss_map(const Real& x, const ThetaContext& ctx);

extern template SurdNumber gauss_map(const SurdNumber&, const ThetaContext&);
extern template TowerNumber gauss_map(const TowerNumber&, const ThetaContext&);
extern template std::optional<BigInt> first_digit(const SurdNumber&, const ThetaContext&);
extern template std::optional<BigInt> first_digit(const TowerNumber&, const ThetaContext&);
extern template DigitSequence expand(const SurdNumber&, std::size_t, const ThetaContext&);
extern template DigitSequence expand(const TowerNumber&, std::size_t, const ThetaContext&);
extern template SurdNumber iterate_map(const SurdNumber&, std::size_t, const ThetaContext&);
extern template TowerNumber iterate_map(const TowerNumber&, std::size_t, const ThetaContext&);
extern template SurdNumber evaluate_cf(const DigitSequence&, const SurdNumber&, const ThetaContext&);
extern template TowerNumber evaluate_cf(const DigitSequence&, const TowerNumber&, const ThetaContext&);

}  // namespace thetacf
