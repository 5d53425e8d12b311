#pragma once

#include "thetacf/surd.hpp"

#include <compare>
#include <cstdint>
#include <string>

namespace thetacf {

/// Exact element A + B·√t of the biquadratic field Q(√s, √t), with
/// A, B ∈ Q(√s).
///
/// Q(√m) is not closed under the square roots the θ-expansion produces at its
/// own fixed points (s* = (√(m+4) − √m)/2), so points like s* are carried in a
/// one-step tower over the base field of θ. The field is fixed by the pair
/// (s, t) of squarefree radicands; t = 1 means the element is in Q(√s).
class TowerNumber {
 public:
  TowerNumber() = default;
  TowerNumber(const SurdNumber& a);  // NOLINT: base field embeds implicitly
  TowerNumber(long a);               // NOLINT
  /// A + B·√d over the base radicand s of A and B.
  TowerNumber(const SurdNumber& a, const SurdNumber& b, std::int64_t d);

  const SurdNumber& a() const { return a_; }
  const SurdNumber& b() const { return b_; }
  std::int64_t base_radicand() const { return base_; }
  std::int64_t radicand() const { return radicand_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  int sign() const;

  TowerNumber conjugate() const;
  /// Relative norm A² − B²t, an element of the base field.
  SurdNumber norm() const;
  TowerNumber inverse() const;

  BigFloat to_float(long precision_bits) const;
  Real to_real() const;
  std::string str() const;

  TowerNumber operator-() const;
  TowerNumber& operator+=(const TowerNumber& y);
  TowerNumber& operator-=(const TowerNumber& y);
  TowerNumber& operator*=(const TowerNumber& y);
  TowerNumber& operator/=(const TowerNumber& y);

  friend TowerNumber operator+(TowerNumber x, const TowerNumber& y) { return x += y; }
  friend TowerNumber operator-(TowerNumber x, const TowerNumber& y) { return x -= y; }
  friend TowerNumber operator*(TowerNumber x, const TowerNumber& y) { return x *= y; }
  friend TowerNumber operator/(TowerNumber x, const TowerNumber& y) { return x /= y; }

  friend bool operator==(const TowerNumber& x, const TowerNumber& y);
  friend std::strong_ordering operator<=>(const TowerNumber& x, const TowerNumber& y);

 private:
  void canonicalize(std::int64_t d);

  SurdNumber a_;
  SurdNumber b_;
  std::int64_t base_ = 1;
  std::int64_t radicand_ = 1;
};

BigInt floor(const TowerNumber& x);

inline std::strong_ordering compare(const TowerNumber& x, const TowerNumber& y) { return x <=> y; }

}  // namespace thetacf
