#pragma once

#include "thetacf/context.hpp"
#include "thetacf/measures.hpp"
#include "thetacf/real.hpp"
#include "thetacf/report.hpp"
#include "thetacf/rng.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace thetacf {

/// One draw from μ using the stream's uniforms (inverse CDF, or rejection
/// for custom densities).
Real sample_measure(const MeasureKind& mu, CounterRng& rng, const ThetaContext& ctx);

/// ValidationError unless μ can be sampled (custom densities must be
/// non-negative with positive mass).
void require_samplable(const MeasureKind& mu);

/// `count` equally spaced points in (0, θ], the last one exactly θ.
std::vector<Real> default_x_grid(std::size_t count, const ThetaContext& ctx);

struct GkCurve {
  std::vector<Real> xs;
  std::size_t samples = 0;
  /// empirical[n][j] = fraction of samples with T_θⁿ(x₀) < xs[j], n = 0 … n_max.
  std::vector<std::vector<Real>> empirical;
  std::vector<Real> limit;
  std::vector<Real> sup_error;
  /// Largest binomial standard error over the grid, per n.
  std::vector<Real> mc_sigma;
  Real q_hat = 0;
  std::size_t fit_first = 0;
  std::size_t fit_last = 0;
};

/// Monte-Carlo estimate of μ(T_θⁿ < x) against the limit gamma_cdf(x).
/// Sample k uses stream k of `seed`; the result does not depend on `threads`.
GkCurve gk_error_curve(const MeasureKind& mu, std::size_t n_max, std::size_t samples, const std::vector<Real>& x_grid,
                       std::uint64_t seed, const ThetaContext& ctx, unsigned threads = 1);

struct LevyResult {
  Real beta_hat = 0;
  Real stderr_beta = 0;
  std::vector<Real> per_sample;
  /// (1/(1+θ²))∫₀^θ θ log x/(1+xθ) dx as printed (negative).
  Real printed_integral = 0;
  /// −(1/log(1+θ²))∫₀^θ θ log x/(1+xθ) dx.
  Real corrected_integral = 0;
  std::size_t n = 0;
};

/// (1/n)·log q_n averaged over x₀ ~ γ_θ, with (q_{n−1}, q_n) rescaled every
/// 50 steps.
LevyResult levy_beta(std::size_t samples, std::size_t n, std::uint64_t seed, const ThetaContext& ctx,
                     unsigned threads = 1);

/// log q_n for a prescribed digit string, by the same rescaled recurrence.
Real log_denominator(const std::vector<std::int64_t>& digits, const ThetaContext& ctx);

/// ∫₀^θ θ log x/(1+xθ) dx by tanh-sinh quadrature.
Real levy_integral(const ThetaContext& ctx);

struct KhinchinTable {
  std::vector<std::size_t> checkpoints;
  /// Mean over samples of (a_1 + … + a_n)/n at each checkpoint.
  std::vector<Real> mean;
  std::vector<Real> median;
  std::size_t samples = 0;
};

/// Digit averages along orbits of x₀ ~ γ_θ.
KhinchinTable khinchin_mean(std::size_t samples, const std::vector<std::size_t>& checkpoints, std::uint64_t seed,
                            const ThetaContext& ctx, unsigned threads = 1);

struct DigitFrequency {
  /// Digits m, m+1, …, m+rows−1; the tail beyond is reported separately.
  std::vector<std::int64_t> digits;
  std::vector<Real> first;
  std::vector<Real> first_law;
  std::vector<Real> nth;
  std::vector<Real> stationary_law;
  Real first_tail = 0;
  Real nth_tail = 0;
  std::size_t samples = 0;
  std::size_t n = 0;
};

/// Empirical law of a_1 and a_n under x₀ ~ λ_θ.
DigitFrequency digit_frequency(std::size_t samples, std::size_t n, std::uint64_t seed, const ThetaContext& ctx,
                               std::size_t rows = 20, unsigned threads = 1);

/// Kolmogorov-Smirnov distance of a sample from a continuous CDF.
template <class Cdf>
Real ks_statistic(std::vector<Real> sample, const Cdf& cdf);

/// Asymptotic critical value c(α)/√n for α = 0.01.
Real ks_critical_01(std::size_t n);

ExperimentReport gk_report(const GkCurve& curve);
ExperimentReport levy_report(const LevyResult& result);
ExperimentReport khinchin_report(const KhinchinTable& table);
ExperimentReport digit_report(const DigitFrequency& freq);

/// Splits [0, count) into contiguous chunks run on up to `threads` threads.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t, std::size_t)>& body);

template <class Cdf>
Real ks_statistic(std::vector<Real> sample, const Cdf& cdf) {
  std::sort(sample.begin(), sample.end());
  const Real n = Real(sample.size());
  Real worst = 0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const Real f = cdf(sample[k]);
    const Real above = Real(k + 1) / n - f;
    const Real below = f - Real(k) / n;
    if (above > worst) worst = above;
    if (below > worst) worst = below;
  }
  return worst;
}

}  // namespace thetacf
