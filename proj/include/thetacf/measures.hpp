#pragma once

#include "thetacf/context.hpp"
#include "thetacf/grid.hpp"
#include "thetacf/real.hpp"

#include <cstddef>
#include <string>
#include <variant>

namespace thetacf {

struct LebesgueMeasure {};
struct GammaMeasure {};
/// γ_{θ,a}; a = 0 is normalized Lebesgue measure.
struct GammaAMeasure {
  Real a;
};
/// Piecewise-linear density w.r.t. normalized Lebesgue measure λ_θ.
struct CustomDensity {
  GridFunction density;
};

using MeasureKind = std::variant<LebesgueMeasure, GammaMeasure, GammaAMeasure, CustomDensity>;

/// "lebesgue", "gamma", "gamma-a:<a>" (a as a decimal, or "theta/2").
MeasureKind parse_measure(const std::string& text, const ThetaContext& ctx);
std::string measure_name(const MeasureKind& mu);

/// log(1 + θx) / log(1 + θ²).
Real gamma_cdf(const Real& x, const ThetaContext& ctx);
/// Density θ/((1+θx)·log(1+θ²)) w.r.t. Lebesgue measure dx.
Real gamma_density(const Real& x, const ThetaContext& ctx);
/// Inverse of gamma_cdf on [0, 1].
Real gamma_inverse_cdf(const Real& u, const ThetaContext& ctx);

/// (aθ+1)x / ((ax+1)θ).
Real gamma_a_cdf(const Real& x, const Real& a, const ThetaContext& ctx);
Real gamma_a_inverse_cdf(const Real& u, const Real& a, const ThetaContext& ctx);

/// Distribution function of μ at x for any supported measure.
Real measure_cdf(const MeasureKind& mu, const Real& x, const ThetaContext& ctx);
/// Density of μ w.r.t. λ_θ at x.
Real measure_density(const MeasureKind& mu, const Real& x, const ThetaContext& ctx);

/// γ̄_θ((a,b)×(c,d)) for the extended measure on [0,θ]².
Real extended_rectangle(const Real& a, const Real& b, const Real& c, const Real& d, const ThetaContext& ctx);

/// Limit of μ(T_θⁿ < x): log((mθ+x)θ)/log(1+θ²).
Real gauss_kuzmin_limit(const Real& x, const ThetaContext& ctx);

/// Stationary first-digit law γ_θ(a_1 = i) = log((i+1)²/(i(i+2)))/log(1+θ²).
Real stationary_digit_law(std::int64_t i, const ThetaContext& ctx);

inline constexpr std::size_t kDefaultPreimageTerms = 1024;

/// |γ_θ(T_θ⁻¹[0,x)) − γ_θ([0,x))| from the preimage series over branches
/// i ≥ m. Branches are summed directly until the closed-form remainder
/// log(1 + x/(θ(I+1)))/log(1+θ²) drops below tail_eps or max_terms
/// branches have been used; the remainder is then added exactly.
Real invariance_check(const Real& x, const Real& tail_eps, const ThetaContext& ctx,
                      std::size_t max_terms = kDefaultPreimageTerms);

}  // namespace thetacf
