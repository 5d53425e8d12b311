#include "thetacf/context.hpp"

#include "thetacf/errors.hpp"

#include <limits>

namespace thetacf {

ThetaContext::ThetaContext(std::int64_t m)
    : m_(m), log_norm_(256) {
  if (m < 1) throw ValidationError("m must be a positive integer, got " + std::to_string(m));
  theta_ = SurdNumber(Rational(0), Rational(1, m), m);
  m_theta_ = SurdNumber::sqrt_of(m);
  log_norm_ = log1p_reciprocal(m, 256);
  theta_r_ = theta_.to_real();
  m_theta_r_ = m_theta_.to_real();
  log_norm_r_ = log_norm_.to_real();
  theta_upper_r_ = theta_r_ * (1 + 16 * std::numeric_limits<Real>::epsilon());
}

}  // namespace thetacf
