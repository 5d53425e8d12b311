#include "thetacf/grid.hpp"

#include "thetacf/errors.hpp"

#include <algorithm>

namespace thetacf {

namespace {

// ∫_{x0}^{x1} (α + βu)·θ/(L(1+θu)) du with the linear piece through the
// cell's end values.
Real gamma_cell(const Real& x0, const Real& x1, const Real& f0, const Real& f1, const Real& hi,
                const ThetaContext& ctx) {
  const Real& theta = ctx.theta_r();
  const Real width = x1 - x0;
  if (width <= 0) return 0;
  const Real beta = (f1 - f0) / width;
  const Real alpha = f0 - beta * x0;
  const Real logr = log1p(theta * (hi - x0) / (1 + theta * x0));
  return (beta * (hi - x0) + (alpha - beta / theta) * logr) / ctx.log_norm_r();
}

}  // namespace

GridFunction::GridFunction(std::vector<Real> nodes, std::vector<Real> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() < 2) throw ValidationError("grid needs at least 2 nodes");
  if (nodes_.size() != values_.size()) throw ValidationError("grid nodes and values differ in length");
  for (std::size_t k = 1; k < nodes_.size(); ++k) {
    if (!(nodes_[k] > nodes_[k - 1])) throw ValidationError("grid nodes must be strictly increasing");
  }
}

std::vector<Real> GridFunction::uniform_nodes(std::size_t n, const ThetaContext& ctx) {
  if (n < 2) throw ValidationError("grid size must be at least 2");
  std::vector<Real> nodes(n);
  const Real h = ctx.theta_r() / Real(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) nodes[k] = h * Real(k);
  nodes[n - 1] = ctx.theta_r();
  return nodes;
}

GridFunction GridFunction::sample(std::vector<Real> nodes, const std::function<Real(const Real&)>& f) {
  std::vector<Real> values(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) values[k] = f(nodes[k]);
  return GridFunction(std::move(nodes), std::move(values));
}

GridFunction GridFunction::constant(std::vector<Real> nodes, const Real& c) {
  std::vector<Real> values(nodes.size(), c);
  return GridFunction(std::move(nodes), std::move(values));
}

std::size_t GridFunction::cell_of(const Real& x) const {
  if (!(x >= nodes_.front()) || x > nodes_.back()) {
    throw DomainError("grid evaluation at " + format_real(x, 20) + " outside [0, theta]");
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
  if (k == 0) return 0;
  return std::min(k - 1, nodes_.size() - 2);
}

Real GridFunction::eval(const Real& x) const {
  const std::size_t k = cell_of(x);
  const Real t = (x - nodes_[k]) / (nodes_[k + 1] - nodes_[k]);
  return values_[k] + t * (values_[k + 1] - values_[k]);
}

Real GridFunction::sup_norm() const {
  Real best = 0;
  for (const auto& v : values_) best = std::max(best, Real(fabs(v)));
  return best;
}

Real GridFunction::lipschitz_seminorm() const {
  Real best = 0;
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
    best = std::max(best, Real(fabs((values_[k + 1] - values_[k]) / (nodes_[k + 1] - nodes_[k]))));
  }
  return best;
}

Real GridFunction::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
Real GridFunction::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

Real GridFunction::integrate_gamma(const Real& x, const ThetaContext& ctx) const {
  const std::size_t last = cell_of(x);
  Real total = 0;
  for (std::size_t k = 0; k <= last; ++k) {
    const Real hi = k == last ? x : nodes_[k + 1];
    total += gamma_cell(nodes_[k], nodes_[k + 1], values_[k], values_[k + 1], hi, ctx);
  }
  return total;
}

Real GridFunction::integrate_gamma(const ThetaContext& ctx) const { return integrate_gamma(nodes_.back(), ctx); }

Real GridFunction::integrate_lebesgue(const Real& x, const ThetaContext& ctx) const {
  const std::size_t last = cell_of(x);
  Real total = 0;
  for (std::size_t k = 0; k <= last; ++k) {
    const Real hi = k == last ? x : nodes_[k + 1];
    const Real width = hi - nodes_[k];
    const Real f_hi = values_[k] + (values_[k + 1] - values_[k]) * width / (nodes_[k + 1] - nodes_[k]);
    total += width * (values_[k] + f_hi) / 2;
  }
  return total / ctx.theta_r();
}

Real GridFunction::integrate_lebesgue(const ThetaContext& ctx) const {
  return integrate_lebesgue(nodes_.back(), ctx);
}

GridFunction& GridFunction::operator+=(const GridFunction& g) {
  if (!same_nodes(g)) throw ValidationError("grid functions live on different grids");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += g.values_[k];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& g) {
  if (!same_nodes(g)) throw ValidationError("grid functions live on different grids");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= g.values_[k];
  return *this;
}

GridFunction& GridFunction::operator*=(const Real& c) {
  for (auto& v : values_) v *= c;
  return *this;
}

}  // namespace thetacf
