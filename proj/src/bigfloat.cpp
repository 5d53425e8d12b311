#include "thetacf/bigfloat.hpp"

#include <cstdio>
#include <ios>
#include <utility>
#include <vector>

namespace thetacf {

BigFloat::BigFloat(long precision_bits) {
  mpfr_init2(value_, precision_bits < MPFR_PREC_MIN ? MPFR_PREC_MIN : precision_bits);
  mpfr_set_zero(value_, 1);
  live_ = true;
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
  live_ = true;
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
  live_ = true;
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() {
  if (live_) mpfr_clear(value_);
}

long BigFloat::precision() const { return static_cast<long>(mpfr_get_prec(value_)); }

double BigFloat::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

Real BigFloat::to_real() const { return Real(mpfr_get_float128(value_, MPFR_RNDN)); }

std::string BigFloat::str(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

BigFloat log1p_reciprocal(long m, long precision_bits) {
  BigFloat out(precision_bits);
  mpq_t q;
  mpq_init(q);
  mpq_set_ui(q, 1, static_cast<unsigned long>(m));
  BigFloat arg(precision_bits + 16);
  mpfr_set_q(arg.get(), q, MPFR_RNDN);
  mpfr_log1p(out.get(), arg.get(), MPFR_RNDN);
  mpq_clear(q);
  return out;
}

std::string format_real(const Real& x, int digits) {
  return x.str(digits, std::ios_base::scientific);
}

Real parse_real(const std::string& text) { return Real(text); }

}  // namespace thetacf
