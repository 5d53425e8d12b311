#include "thetacf/transfer_operator.hpp"

#include "thetacf/errors.hpp"

#include <boost/math/special_functions/bernoulli.hpp>

#include <algorithm>
#include <array>
#include <limits>
#include <mutex>

namespace thetacf {

namespace {

// Below this argument ψ₁ − 1/z is shifted upwards before the asymptotic
// series is used.
constexpr int kAsymptoticStart = 40;
// Groups up to this many branches are summed term by term.
constexpr std::int64_t kDirectGroup = 64;
constexpr int kBernoulliTerms = 40;

const std::array<Real, kBernoulliTerms>& bernoulli_table() {
  static const std::array<Real, kBernoulliTerms> table = [] {
    std::array<Real, kBernoulliTerms> t{};
    for (int k = 0; k < kBernoulliTerms; ++k) t[k] = boost::math::bernoulli_b2n<Real>(k + 1);
    return t;
  }();
  return table;
}

std::size_t cell_index(const std::vector<Real>& nodes, const Real& u) {
  auto it = std::upper_bound(nodes.begin(), nodes.end(), u);
  std::size_t k = static_cast<std::size_t>(it - nodes.begin());
  k = k == 0 ? 0 : k - 1;
  return std::min(k, nodes.size() - 2);
}

GridFunction on_nodes(const GridFunction& f, const std::vector<Real>& nodes) {
  if (f.nodes() == nodes) return f;
  return GridFunction::sample(nodes, [&f](const Real& x) { return f.eval(x); });
}

}  // namespace

NormKind parse_norm(const std::string& text) {
  if (text == "sup") return NormKind::sup;
  if (text == "lipschitz") return NormKind::lipschitz;
  throw ValidationError("unknown norm '" + text + "' (expected sup or lipschitz)");
}

std::string norm_name(NormKind kind) { return kind == NormKind::sup ? "sup" : "lipschitz"; }

void OperatorConfig::validate() const {
  if (grid_size < 2) throw ValidationError("operator grid needs at least 2 nodes");
  if (!(tail_eps > 0)) throw ValidationError("tail_eps must be positive");
}

Real grid_norm(const GridFunction& g, NormKind kind) {
  if (kind == NormKind::sup) return g.sup_norm();
  return g.sup_norm() + g.lipschitz_seminorm();
}

Real trigamma_tail(const Real& z_in, const Real& abs_tol) {
  if (!(z_in > 0)) throw DomainError("trigamma_tail needs a positive argument");
  Real z = z_in;
  Real acc = 0;
  while (z < kAsymptoticStart) {
    acc += 1 / (z * z * (z + 1));
    z += 1;
  }
  const Real inv2 = 1 / (z * z);
  Real sum = inv2 / 2;
  Real power = inv2 / z;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const auto& b = bernoulli_table();
  for (int k = 0; k < kBernoulliTerms; ++k) {
    const Real term = b[k] * power;
    if (fabs(term) < abs_tol || fabs(term) < eps * sum) break;
    sum += term;
    power *= inv2;
  }
  return acc + sum;
}

TransferOperator::TransferOperator(const ThetaContext& ctx, const OperatorConfig& cfg)
    : TransferOperator(ctx, GridFunction::uniform_nodes(cfg.grid_size, ctx), cfg.tail_eps) {
  cfg.validate();
}

TransferOperator::TransferOperator(const ThetaContext& ctx, std::vector<Real> nodes, const Real& tail_eps)
    : nodes_(std::move(nodes)), once_(std::make_shared<std::once_flag>()) {
  if (nodes_.size() < 2 || nodes_.front() != 0 || nodes_.back() != ctx.theta_r()) {
    throw ValidationError("operator grid must span [0, theta] with at least 2 nodes");
  }
  if (!(tail_eps > 0)) throw ValidationError("tail_eps must be positive");
  density_.resize(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) density_[k] = 1 / (nodes_[k] + ctx.m_theta_r());
  build(ctx, tail_eps);
}

void TransferOperator::build(const ThetaContext& ctx, const Real& tail_eps) {
  const std::size_t n = nodes_.size();
  const Real& theta = ctx.theta_r();
  const Real theta3 = theta * theta * theta;
  std::vector<Real> scratch(n, Real(0));
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> touched;
  row_start_.assign(1, 0);

  auto deposit = [&](std::size_t k, const Real& s0, const Real& s1) {
    const Real& lo = nodes_[k];
    const Real& hi = nodes_[k + 1];
    const Real width = hi - lo;
    for (std::size_t j : {k, k + 1}) {
      if (!seen[j]) {
        seen[j] = 1;
        touched.push_back(j);
      }
    }
    scratch[k] += (s0 * hi - s1) / width;
    scratch[k + 1] += (s1 - s0 * lo) / width;
  };

  for (std::size_t row = 0; row < n; ++row) {
    const Real& x = nodes_[row];
    const Real c = x * theta + 1;
    const Real z0 = x / theta;
    std::int64_t i = ctx.m();
    while (true) {
      const Real ri = Real(i);
      const Real u = 1 / (x + ri * theta);
      const std::size_t k = cell_index(nodes_, u);
      if (k == 0) {
        // Every remaining branch lands in the first cell.
        const Real width = nodes_[1];
        const Real scale = c / theta3;
        const Real s0 = c / theta * u;
        const Real s1 = scale * trigamma_tail(z0 + ri, tail_eps * width / scale);
        deposit(0, s0, s1);
        break;
      }
      const Real& lo = nodes_[k];
      Real last_r = floor((1 / lo - x) / theta);
      if (last_r < ri) last_r = ri;
      const std::int64_t last = static_cast<std::int64_t>(last_r.convert_to<long long>());
      Real s0 = 0, s1 = 0;
      if (last - i < kDirectGroup) {
        for (std::int64_t j = i; j <= last; ++j) {
          const Real rj = Real(j);
          const Real uj = 1 / (x + rj * theta);
          const Real p = c * uj / (x + (rj + 1) * theta);
          s0 += p;
          s1 += p * uj;
        }
      } else {
        const Real after = Real(last + 1);
        s0 = c / theta * (u - 1 / (x + after * theta));
        s1 = c / theta3 * (trigamma_tail(z0 + ri, 0) - trigamma_tail(z0 + after, 0));
      }
      deposit(k, s0, s1);
      i = last + 1;
    }
    std::sort(touched.begin(), touched.end());
    for (std::size_t j : touched) {
      columns_.push_back(j);
      weights_.push_back(scratch[j]);
      scratch[j] = 0;
      seen[j] = 0;
    }
    touched.clear();
    row_start_.push_back(columns_.size());
  }
}

void TransferOperator::require_grid(const GridFunction& f) const {
  if (f.nodes() != nodes_) throw ValidationError("grid function does not live on the operator grid");
}

GridFunction TransferOperator::apply(const GridFunction& f) const {
  require_grid(f);
  std::vector<Real> out(nodes_.size());
  const auto& v = f.values();
  for (std::size_t row = 0; row < nodes_.size(); ++row) {
    Real acc = 0;
    for (std::size_t e = row_start_[row]; e < row_start_[row + 1]; ++e) acc += weights_[e] * v[columns_[e]];
    out[row] = acc;
  }
  return GridFunction(nodes_, std::move(out));
}

GridFunction TransferOperator::apply(const GridFunction& f, std::size_t times) const {
  GridFunction g = f;
  for (std::size_t t = 0; t < times; ++t) g = apply(g);
  return g;
}

GridFunction TransferOperator::apply_density(const GridFunction& g) const {
  require_grid(g);
  std::vector<Real> ratio(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) ratio[k] = g[k] / density_[k];
  GridFunction out = apply(GridFunction(nodes_, std::move(ratio)));
  for (std::size_t k = 0; k < nodes_.size(); ++k) out.values()[k] *= density_[k];
  return out;
}

const std::vector<Real>& TransferOperator::stationary_weights() const {
  std::call_once(*once_, [this] {
    const std::size_t n = nodes_.size();
    std::vector<Real> pi(n), next(n);
    Real total = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const Real left = k == 0 ? Real(0) : nodes_[k] - nodes_[k - 1];
      const Real right = k + 1 == n ? Real(0) : nodes_[k + 1] - nodes_[k];
      pi[k] = density_[k] * (left + right) / 2;
      total += pi[k];
    }
    for (auto& p : pi) p /= total;
    const Real tol = 100 * std::numeric_limits<Real>::epsilon();
    constexpr int kMaxSweeps = 20000;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
      std::fill(next.begin(), next.end(), Real(0));
      for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t e = row_start_[row]; e < row_start_[row + 1]; ++e) next[columns_[e]] += pi[row] * weights_[e];
      }
      Real mass = 0;
      for (const auto& p : next) mass += p;
      Real change = 0;
      for (std::size_t k = 0; k < n; ++k) {
        next[k] /= mass;
        change += fabs(next[k] - pi[k]);
      }
      pi.swap(next);
      if (change < tol) break;
    }
    if (sweep == kMaxSweeps) throw NumericError("stationary weights did not converge");
    stationary_ = std::move(pi);
  });
  return stationary_;
}

Real TransferOperator::ergodic_limit(const GridFunction& f) const {
  require_grid(f);
  const auto& pi = stationary_weights();
  Real acc = 0;
  for (std::size_t k = 0; k < pi.size(); ++k) acc += pi[k] * f[k];
  return acc;
}

Real TransferOperator::row_sum_defect() const {
  Real worst = 0;
  for (std::size_t row = 0; row < nodes_.size(); ++row) {
    Real acc = 0;
    for (std::size_t e = row_start_[row]; e < row_start_[row + 1]; ++e) acc += weights_[e];
    worst = std::max(worst, Real(fabs(acc - 1)));
  }
  return worst;
}

GridFunction apply_U(const GridFunction& f, const OperatorConfig& cfg, const ThetaContext& ctx) {
  const TransferOperator op(ctx, f.nodes(), cfg.tail_eps);
  return op.apply(f);
}

GridFunction invariant_density(const ThetaContext& ctx, std::vector<Real> nodes) {
  const Real mt = ctx.m_theta_r();
  const Real inv_l = 1 / ctx.log_norm_r();
  return GridFunction::sample(std::move(nodes), [&](const Real& x) { return inv_l / (x + mt); });
}

GridFunction invariant_density(const ThetaContext& ctx, const OperatorConfig& cfg) {
  cfg.validate();
  return invariant_density(ctx, GridFunction::uniform_nodes(cfg.grid_size, ctx));
}

GridFunction transfer_density(const GridFunction& g, const OperatorConfig& cfg, const ThetaContext& ctx) {
  const TransferOperator op(ctx, g.nodes(), cfg.tail_eps);
  return op.apply_density(g);
}

GridFunction transfer_density_direct(const GridFunction& g, std::size_t terms, const ThetaContext& ctx) {
  const auto& nodes = g.nodes();
  const Real& theta = ctx.theta_r();
  // Past this branch index u_i lies in the first cell, where g is linear.
  const Real first_cell = nodes[1];
  const std::int64_t reach = static_cast<std::int64_t>((1 / (first_cell * theta)).convert_to<long long>()) + 2;
  const std::int64_t stop = ctx.m() + std::max<std::int64_t>(static_cast<std::int64_t>(terms), reach);
  const Real g0 = g[0];
  const Real slope = (g[1] - g[0]) / first_cell;
  std::vector<Real> out(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Real& x = nodes[k];
    Real acc = 0;
    for (std::int64_t i = ctx.m(); i < stop; ++i) {
      const Real u = std::min(Real(1 / (x + Real(i) * theta)), nodes.back());
      acc += u * u * g.eval(u);
    }
    // Σ_{i≥I} u_i² and Σ u_i³ by the midpoint integral.
    const Real edge = x + (Real(stop) - Real(0.5)) * theta;
    acc += g0 / (theta * edge) + slope / (2 * theta * edge * edge);
    out[k] = acc;
  }
  return GridFunction(nodes, std::move(out));
}

GridFunction density_to_gamma_relative(const GridFunction& h, const ThetaContext& ctx) {
  const Real mass = h.integrate_lebesgue(ctx);
  if (!(fabs(mass - 1) <= Real("1e-6"))) {
    throw ValidationError("density is not normalized: integral " + format_real(mass, 12));
  }
  const Real& theta = ctx.theta_r();
  const Real scale = ctx.log_norm_r() / (theta * theta);
  std::vector<Real> values(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) values[k] = scale * (1 + theta * h.nodes()[k]) * h[k];
  return GridFunction(h.nodes(), std::move(values));
}

std::vector<Real> pushforward_cdf(const TransferOperator& op, const GridFunction& h, std::size_t n,
                                  const std::vector<Real>& xs, const ThetaContext& ctx) {
  const GridFunction f = density_to_gamma_relative(on_nodes(h, op.nodes()), ctx);
  const GridFunction g = op.apply(f, n);
  std::vector<Real> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(g.integrate_gamma(x, ctx));
  return out;
}

Real pushforward_cdf(const GridFunction& h, std::size_t n, const Real& x, const OperatorConfig& cfg,
                     const ThetaContext& ctx) {
  const TransferOperator op(ctx, cfg);
  return pushforward_cdf(op, h, n, std::vector<Real>{x}, ctx).front();
}

Real decay_noise_floor() { return 100 * std::numeric_limits<Real>::epsilon(); }

DecayEstimate estimate_decay_rate(const TransferOperator& op, const GridFunction& h, std::size_t n_max,
                                  NormKind norm, const ThetaContext& ctx) {
  if (n_max < 4) throw ValidationError("decay estimation needs n_max >= 4");
  const GridFunction f = density_to_gamma_relative(on_nodes(h, op.nodes()), ctx);
  DecayEstimate out;
  out.limit = op.ergodic_limit(f);
  out.continuum_limit = f.integrate_gamma(ctx);
  const GridFunction limit = GridFunction::constant(op.nodes(), out.limit);
  const Real floor = decay_noise_floor();
  GridFunction g = f;
  std::size_t above = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    g = op.apply(g);
    const Real r = grid_norm(g - limit, norm);
    out.residuals.push_back(r);
    if (r < floor) break;
    ++above;
  }
  if (above < 2) return out;
  const std::size_t first = std::min(above / 2, above - 2);
  // Least squares for log r_n = a + b·n over n = first+1 … above.
  Real sn = 0, sy = 0, snn = 0, sny = 0;
  const Real count = Real(above - first);
  for (std::size_t idx = first; idx < above; ++idx) {
    const Real nn = Real(idx + 1);
    const Real y = log(out.residuals[idx]);
    sn += nn;
    sy += y;
    snn += nn * nn;
    sny += nn * y;
  }
  const Real slope = (count * sny - sn * sy) / (count * snn - sn * sn);
  out.q_hat = exp(slope);
  out.fitted_points = above - first;
  out.fit_first = first + 1;
  return out;
}

DecayEstimate estimate_decay_rate(const GridFunction& h, std::size_t n_max, const OperatorConfig& cfg,
                                  const ThetaContext& ctx) {
  const TransferOperator op(ctx, cfg);
  return estimate_decay_rate(op, h, n_max, cfg.norm, ctx);
}

}  // namespace thetacf
