#pragma once

#include "thetacf/context.hpp"
#include "thetacf/grid.hpp"
#include "thetacf/real.hpp"

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace thetacf {

enum class NormKind { sup, lipschitz };

NormKind parse_norm(const std::string& text);
std::string norm_name(NormKind kind);

struct OperatorConfig {
  std::size_t grid_size = 2048;
  /// Absolute accuracy budget for the closed-form branch tail in every row.
  Real tail_eps = Real("1e-12");
  NormKind norm = NormKind::sup;

  void validate() const;
};

/// sup|g| or sup|g| + max adjacent divided difference.
Real grid_norm(const GridFunction& g, NormKind kind);

/// ψ₁(z) − 1/z for z > 0, the tail Σ_{j≥0} 1/((z+j)²(z+j+1)). Asymptotic
/// series terms are dropped once smaller than `abs_tol` or below working
/// precision.
Real trigamma_tail(const Real& z, const Real& abs_tol);

/// Collocation matrix of Uf(x) = Σ_{i≥m} P_i(x) f(u_i(x)) on a fixed grid
/// with piecewise-linear f.
///
/// Row k holds the weights of the node values f(x_j) in Uf(x_k). Branches
/// whose images share one grid cell are summed in closed form; all
/// branches with u_i(x) in the first cell are folded into one tail term, so
/// each row sums to 1 up to rounding.
class TransferOperator {
 public:
  TransferOperator(const ThetaContext& ctx, const OperatorConfig& cfg);
  TransferOperator(const ThetaContext& ctx, std::vector<Real> nodes, const Real& tail_eps);
  TransferOperator(const TransferOperator&) = delete;
  TransferOperator& operator=(const TransferOperator&) = delete;
  TransferOperator(TransferOperator&&) = default;
  TransferOperator& operator=(TransferOperator&&) = default;

  const std::vector<Real>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t nonzeros() const { return weights_.size(); }

  GridFunction apply(const GridFunction& f) const;
  GridFunction apply(const GridFunction& f, std::size_t times) const;
  /// Lebesgue transfer operator Pg = ρ·U(g/ρ) with ρ the invariant density.
  GridFunction apply_density(const GridFunction& g) const;

  /// Left fixed vector π of the weight matrix, Σπ = 1: the discrete
  /// operator sends f to (π·f)·1 in the limit.
  const std::vector<Real>& stationary_weights() const;
  /// lim Uⁿf of the discretized operator.
  Real ergodic_limit(const GridFunction& f) const;

  /// max_k |Σ_j w_kj − 1|.
  Real row_sum_defect() const;

 private:
  void build(const ThetaContext& ctx, const Real& tail_eps);
  void require_grid(const GridFunction& f) const;

  std::vector<Real> nodes_;
  std::vector<Real> density_;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> columns_;
  std::vector<Real> weights_;
  mutable std::vector<Real> stationary_;
  std::shared_ptr<std::once_flag> once_;
};

GridFunction apply_U(const GridFunction& f, const OperatorConfig& cfg, const ThetaContext& ctx);

/// ρ_θ(x) = (1/log(1+θ²))·1/(x+mθ) on the uniform grid.
GridFunction invariant_density(const ThetaContext& ctx, const OperatorConfig& cfg);
GridFunction invariant_density(const ThetaContext& ctx, std::vector<Real> nodes);

/// Lebesgue transfer operator applied to a density g (w.r.t. dx).
GridFunction transfer_density(const GridFunction& g, const OperatorConfig& cfg, const ThetaContext& ctx);

/// Direct collocation Σ_i u_i(x)² g(u_i(x)) of the Lebesgue transfer
/// operator, truncated after `terms` branches plus a first-order tail.
/// Independent of the U machinery; used as a cross-check.
GridFunction transfer_density_direct(const GridFunction& g, std::size_t terms, const ThetaContext& ctx);

/// f = log(1+θ²)(1+θx)/θ² · h, the γ_θ-density of μ = h·λ_θ.
/// ValidationError unless ∫h dλ_θ = 1 within 1e−6.
GridFunction density_to_gamma_relative(const GridFunction& h, const ThetaContext& ctx);

/// μ(T_θ⁻ⁿ[0, x)) for dμ = h dλ_θ.
Real pushforward_cdf(const GridFunction& h, std::size_t n, const Real& x, const OperatorConfig& cfg,
                     const ThetaContext& ctx);
std::vector<Real> pushforward_cdf(const TransferOperator& op, const GridFunction& h, std::size_t n,
                                  const std::vector<Real>& xs, const ThetaContext& ctx);

struct DecayEstimate {
  Real q_hat = 0;
  /// r_n for n = 1, 2, … (may stop before n_max at the noise floor).
  std::vector<Real> residuals;
  /// Limit used for r_n: the discrete operator's ergodic limit.
  Real limit = 0;
  /// ∫f dγ_θ of the interpolant; differs from `limit` by discretization.
  Real continuum_limit = 0;
  std::size_t fitted_points = 0;
  std::size_t fit_first = 0;
};

/// r_n = ‖Uⁿf − c·1‖ with f built from h and c the ergodic limit of the
/// discretized operator; q_hat = exp(least-squares slope of log r_n) over
/// the second half of the computed range.
DecayEstimate estimate_decay_rate(const GridFunction& h, std::size_t n_max, const OperatorConfig& cfg,
                                  const ThetaContext& ctx);
DecayEstimate estimate_decay_rate(const TransferOperator& op, const GridFunction& h, std::size_t n_max,
                                  NormKind norm, const ThetaContext& ctx);

/// Noise floor below which residuals stop the decay iteration.
Real decay_noise_floor();

}  // namespace thetacf
