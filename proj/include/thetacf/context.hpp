#pragma once

#include "thetacf/bigfloat.hpp"
#include "thetacf/real.hpp"
#include "thetacf/surd.hpp"

#include <cstdint>

namespace thetacf {

/// The pair (m, θ = 1/√m) with exact and binary128 forms of the derived
/// constants. Immutable after construction.
class ThetaContext {
 public:
  explicit ThetaContext(std::int64_t m);

  std::int64_t m() const { return m_; }

  /// θ = √m/m exactly.
  const SurdNumber& theta() const { return theta_; }
  /// mθ = 1/θ = √m exactly.
  const SurdNumber& m_theta() const { return m_theta_; }
  /// log(1 + θ²) = log(1 + 1/m) at 256 bits.
  const BigFloat& log_norm() const { return log_norm_; }

  const Real& theta_r() const { return theta_r_; }
  const Real& m_theta_r() const { return m_theta_r_; }
  const Real& log_norm_r() const { return log_norm_r_; }
  /// θ plus a few ulps; binary128 inputs up to here count as θ.
  const Real& theta_upper_r() const { return theta_upper_r_; }

 private:
  std::int64_t m_;
  SurdNumber theta_;
  SurdNumber m_theta_;
  BigFloat log_norm_;
  Real theta_r_;
  Real m_theta_r_;
  Real log_norm_r_;
  Real theta_upper_r_;
};

}  // namespace thetacf
