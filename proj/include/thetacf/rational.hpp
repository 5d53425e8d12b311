#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>

namespace thetacf {

using BigInt = mpz_class;
using Rational = mpq_class;

/// ⌊q⌋ for a rational in lowest terms.
BigInt floor_of(const Rational& q);

/// Exact integer square root when `n` is a perfect square.
bool perfect_square(const BigInt& n, BigInt* root = nullptr);

int sign_of(const Rational& q);

/// Splits n = k²·s with s squarefree; returns (k, s).
std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t n);

/// Parses "A" or "A/B" with optional sign into a canonical rational.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

/// Checked narrowing; throws NumericError if z does not fit.
std::int64_t to_int64(const BigInt& z);

}  // namespace thetacf
