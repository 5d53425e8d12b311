#include "thetacf/surd.hpp"

#include "thetacf/errors.hpp"

#include <sstream>

namespace thetacf {

std::int64_t common_radicand(std::int64_t r1, std::int64_t r2) {
  if (r1 == 1) return r2;
  if (r2 == 1 || r1 == r2) return r1;
  throw DomainError("operands live in different quadratic fields (sqrt(" + std::to_string(r1) +
                    ") vs sqrt(" + std::to_string(r2) + "))");
}

int sign_of_surd(const Rational& alpha, const Rational& beta, std::int64_t s) {
  const int sa = sgn(alpha);
  const int sb = sgn(beta);
  if (sb == 0) return sa;
  if (s == 1) return sgn(Rational(alpha + beta));
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: the larger of α² and β²s wins.
  const Rational lhs = alpha * alpha;
  const Rational rhs = beta * beta * s;
  const int c = cmp(lhs, rhs);
  if (c > 0) return sa;
  if (c < 0) return sb;
  return 0;
}

SurdNumber::SurdNumber(const Rational& a) : a_(a) { a_.canonicalize(); }

SurdNumber::SurdNumber(long a) : a_(a) {}

SurdNumber::SurdNumber(const Rational& a, const Rational& b, std::int64_t m) : a_(a), b_(b) {
  a_.canonicalize();
  b_.canonicalize();
  canonicalize(m);
}

SurdNumber SurdNumber::sqrt_of(std::int64_t m) { return SurdNumber(Rational(0), Rational(1), m); }

void SurdNumber::canonicalize(std::int64_t m) {
  if (m <= 0) throw DomainError("radicand must be a positive integer");
  const auto [k, s] = squarefree_split(m);
  b_ *= k;
  if (s == 1) {
    a_ += b_;
    b_ = 0;
  }
  radicand_ = sgn(b_) == 0 ? 1 : s;
}

int SurdNumber::sign() const { return sign_of_surd(a_, b_, radicand_); }

SurdNumber SurdNumber::conjugate() const {
  SurdNumber out(*this);
  out.b_ = -out.b_;
  return out;
}

Rational SurdNumber::norm() const { return a_ * a_ - b_ * b_ * radicand_; }

SurdNumber SurdNumber::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero");
  const Rational n = norm();
  SurdNumber out;
  out.a_ = a_ / n;
  out.b_ = -b_ / n;
  out.radicand_ = radicand_;
  return out;
}

SurdNumber SurdNumber::operator-() const {
  SurdNumber out(*this);
  out.a_ = -out.a_;
  out.b_ = -out.b_;
  return out;
}

SurdNumber& SurdNumber::operator+=(const SurdNumber& y) {
  const std::int64_t r = common_radicand(radicand_, y.radicand_);
  a_ += y.a_;
  b_ += y.b_;
  radicand_ = sgn(b_) == 0 ? 1 : r;
  return *this;
}

SurdNumber& SurdNumber::operator-=(const SurdNumber& y) {
  const std::int64_t r = common_radicand(radicand_, y.radicand_);
  a_ -= y.a_;
  b_ -= y.b_;
  radicand_ = sgn(b_) == 0 ? 1 : r;
  return *this;
}

SurdNumber& SurdNumber::operator*=(const SurdNumber& y) {
  const std::int64_t r = common_radicand(radicand_, y.radicand_);
  Rational a = a_ * y.a_ + b_ * y.b_ * r;
  Rational b = a_ * y.b_ + b_ * y.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  radicand_ = sgn(b_) == 0 ? 1 : r;
  return *this;
}

SurdNumber& SurdNumber::operator/=(const SurdNumber& y) { return *this *= y.inverse(); }

bool operator==(const SurdNumber& x, const SurdNumber& y) {
  return x.a_ == y.a_ && x.b_ == y.b_ && x.radicand_ == y.radicand_;
}

std::strong_ordering operator<=>(const SurdNumber& x, const SurdNumber& y) {
  const std::int64_t r = common_radicand(x.radicand_, y.radicand_);
  const int s = sign_of_surd(Rational(x.a_ - y.a_), Rational(x.b_ - y.b_), r);
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

BigInt floor(const SurdNumber& x) {
  if (x.is_rational()) return floor_of(x.a());
  const std::int64_t s = x.radicand();
  // b√s = sign(p)·√(p²s)/q is bracketed by the integer square root.
  const BigInt p = x.b().get_num();
  const BigInt q = x.b().get_den();
  BigInt root;
  const BigInt p2s = p * p * s;
  mpz_sqrt(root.get_mpz_t(), p2s.get_mpz_t());
  Rational approx(sgn(p) < 0 ? BigInt(-root) : root, q);
  approx.canonicalize();
  BigInt k = floor_of(Rational(x.a() + approx));
  while (sign_of_surd(Rational(x.a() - k), x.b(), s) < 0) k -= 1;
  while (sign_of_surd(Rational(x.a() - k - 1), x.b(), s) >= 0) k += 1;
  return k;
}

BigFloat SurdNumber::to_float(long precision_bits) const {
  if (precision_bits < 2) throw DomainError("to_float: precision must be at least 2 bits");
  BigFloat out(precision_bits);
  if (is_rational()) {
    mpfr_set_q(out.get(), a_.get_mpq_t(), MPFR_RNDN);
    return out;
  }
  const long work = precision_bits + 40;
  BigFloat t(work);
  mpfr_sqrt_ui(t.get(), static_cast<unsigned long>(radicand_), MPFR_RNDN);
  mpfr_mul_q(t.get(), t.get(), b_.get_mpq_t(), MPFR_RNDN);
  BigFloat res(work);
  const int sa = sgn(a_);
  if (sa == 0 || sa == sgn(b_)) {
    mpfr_add_q(res.get(), t.get(), a_.get_mpq_t(), MPFR_RNDN);
  } else {
    // a and b√s cancel: evaluate norm/(a − b√s), whose terms share a sign.
    BigFloat den(work);
    mpfr_neg(den.get(), t.get(), MPFR_RNDN);
    mpfr_add_q(den.get(), den.get(), a_.get_mpq_t(), MPFR_RNDN);
    const Rational n = norm();
    BigFloat num(work);
    mpfr_set_q(num.get(), n.get_mpq_t(), MPFR_RNDN);
    mpfr_div(res.get(), num.get(), den.get(), MPFR_RNDN);
  }
  mpfr_set(out.get(), res.get(), MPFR_RNDN);
  return out;
}

Real SurdNumber::to_real() const { return to_float(kRealBits).to_real(); }

std::string SurdNumber::str() const {
  std::ostringstream os;
  os << a_.get_str();
  if (!is_rational()) {
    const Rational mag = abs(b_);
    os << (sgn(b_) < 0 ? "-" : "+") << mag.get_num().get_str() << "/" << mag.get_den().get_str()
       << "*sqrt(" << radicand_ << ")";
  }
  return os.str();
}

}  // namespace thetacf
