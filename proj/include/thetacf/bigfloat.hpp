#pragma once

#include "thetacf/real.hpp"

// MPFR declares its binary128 entry points with the C type name.
#define MPFR_WANT_FLOAT128 1
#ifndef _Float128
#define _Float128 __float128
#endif
#include <mpfr.h>

#include <string>

namespace thetacf {

/// Owning handle to an MPFR value with an explicit precision in bits.
class BigFloat {
 public:
  explicit BigFloat(long precision_bits = 128);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  long precision() const;

  double to_double() const;
  Real to_real() const;
  /// Decimal rendering with `digits` significant digits.
  std::string str(int digits) const;

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

 private:
  mpfr_t value_;
  bool live_ = false;
};

/// log(1 + 1/m) at the given precision.
BigFloat log1p_reciprocal(long m, long precision_bits);

}  // namespace thetacf
