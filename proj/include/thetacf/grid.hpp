#pragma once

#include "thetacf/context.hpp"
#include "thetacf/real.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace thetacf {

/// Piecewise-linear function on a strictly increasing grid spanning [0, θ].
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(std::vector<Real> nodes, std::vector<Real> values);

  /// N equally spaced nodes, the last one exactly θ.
  static std::vector<Real> uniform_nodes(std::size_t n, const ThetaContext& ctx);
  static GridFunction sample(std::vector<Real> nodes, const std::function<Real(const Real&)>& f);
  static GridFunction constant(std::vector<Real> nodes, const Real& c);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Real>& nodes() const { return nodes_; }
  const std::vector<Real>& values() const { return values_; }
  std::vector<Real>& values() { return values_; }
  const Real& operator[](std::size_t k) const { return values_[k]; }

  /// Linear interpolation; DomainError outside [nodes.front(), nodes.back()].
  Real eval(const Real& x) const;

  Real sup_norm() const;
  /// Largest |f(x_{k+1}) − f(x_k)| / (x_{k+1} − x_k).
  Real lipschitz_seminorm() const;
  Real min_value() const;
  Real max_value() const;

  /// ∫₀^x f dγ_θ of the interpolant, exact per cell.
  Real integrate_gamma(const Real& x, const ThetaContext& ctx) const;
  Real integrate_gamma(const ThetaContext& ctx) const;
  /// ∫₀^x f dλ_θ of the interpolant with λ_θ = length/θ.
  Real integrate_lebesgue(const Real& x, const ThetaContext& ctx) const;
  Real integrate_lebesgue(const ThetaContext& ctx) const;

  bool same_nodes(const GridFunction& other) const { return nodes_ == other.nodes_; }

  GridFunction& operator+=(const GridFunction& g);
  GridFunction& operator-=(const GridFunction& g);
  GridFunction& operator*=(const Real& c);
  friend GridFunction operator+(GridFunction f, const GridFunction& g) { return f += g; }
  friend GridFunction operator-(GridFunction f, const GridFunction& g) { return f -= g; }
  friend GridFunction operator*(const Real& c, GridFunction f) { return f *= c; }

 private:
  std::size_t cell_of(const Real& x) const;

  std::vector<Real> nodes_;
  std::vector<Real> values_;
};

}  // namespace thetacf
