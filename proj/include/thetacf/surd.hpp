#pragma once

#include "thetacf/bigfloat.hpp"
#include "thetacf/rational.hpp"
#include "thetacf/real.hpp"

#include <compare>
#include <cstdint>
#include <string>

namespace thetacf {

/// Exact element a + b·√s of the real quadratic field Q(√s).
///
/// The radicand is stored in squarefree form: constructing with m = k²·s
/// rescales b by k, and a radicand of 1 folds b into a. A rational value has
/// radicand 1 and combines with any other radicand; combining two distinct
/// non-trivial radicands is a DomainError.
class SurdNumber {
 public:
  SurdNumber() = default;
  SurdNumber(const Rational& a);  // NOLINT: rationals embed implicitly
  SurdNumber(long a);             // NOLINT
  SurdNumber(const Rational& a, const Rational& b, std::int64_t m);

  /// √m as a field element.
  static SurdNumber sqrt_of(std::int64_t m);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  std::int64_t radicand() const { return radicand_; }

  bool is_zero() const { return mpq_sgn(a_.get_mpq_t()) == 0 && mpq_sgn(b_.get_mpq_t()) == 0; }
  bool is_rational() const { return mpq_sgn(b_.get_mpq_t()) == 0; }
  int sign() const;

  SurdNumber conjugate() const;
  /// Field norm a² − b²s.
  Rational norm() const;
  SurdNumber inverse() const;

  BigFloat to_float(long precision_bits) const;
  Real to_real() const;
  std::string str() const;

  SurdNumber operator-() const;
  SurdNumber& operator+=(const SurdNumber& y);
  SurdNumber& operator-=(const SurdNumber& y);
  SurdNumber& operator*=(const SurdNumber& y);
  SurdNumber& operator/=(const SurdNumber& y);

  friend SurdNumber operator+(SurdNumber x, const SurdNumber& y) { return x += y; }
  friend SurdNumber operator-(SurdNumber x, const SurdNumber& y) { return x -= y; }
  friend SurdNumber operator*(SurdNumber x, const SurdNumber& y) { return x *= y; }
  friend SurdNumber operator/(SurdNumber x, const SurdNumber& y) { return x /= y; }

  friend bool operator==(const SurdNumber& x, const SurdNumber& y);
  friend std::strong_ordering operator<=>(const SurdNumber& x, const SurdNumber& y);

 private:
  void canonicalize(std::int64_t m);

  Rational a_{0};
  Rational b_{0};
  std::int64_t radicand_ = 1;
};

/// Common radicand of two operands, or DomainError if they live in
/// different quadratic fields.
std::int64_t common_radicand(std::int64_t r1, std::int64_t r2);

/// Exact ⌊x⌋ using integer square roots and exact sign tests only.
BigInt floor(const SurdNumber& x);

/// Sign of α + β·√s for rationals α, β and squarefree s.
int sign_of_surd(const Rational& alpha, const Rational& beta, std::int64_t s);

inline std::strong_ordering compare(const SurdNumber& x, const SurdNumber& y) { return x <=> y; }

inline BigFloat to_float(const SurdNumber& x, long precision_bits) {
  return x.to_float(precision_bits);
}

}  // namespace thetacf
