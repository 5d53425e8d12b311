#include "thetacf/tower.hpp"

#include "thetacf/errors.hpp"

#include <sstream>

namespace thetacf {

namespace {

// Integer-bracketed rational estimate of q·√n (error below 1/den(q)).
Rational rough(const Rational& q, std::int64_t n) {
  if (n == 1 || sgn(q) == 0) return q;
  const BigInt p = q.get_num();
  BigInt root;
  const BigInt p2n = p * p * n;
  mpz_sqrt(root.get_mpz_t(), p2n.get_mpz_t());
  Rational out(sgn(p) < 0 ? BigInt(-root) : root, q.get_den());
  out.canonicalize();
  return out;
}

Rational rough(const SurdNumber& x) { return x.a() + rough(x.b(), x.radicand()); }

}  // namespace

TowerNumber::TowerNumber(const SurdNumber& a) : a_(a), base_(a.radicand()) {}

TowerNumber::TowerNumber(long a) : a_(a) {}

TowerNumber::TowerNumber(const SurdNumber& a, const SurdNumber& b, std::int64_t d) : a_(a), b_(b) {
  base_ = common_radicand(a.radicand(), b.radicand());
  canonicalize(d);
}

void TowerNumber::canonicalize(std::int64_t d) {
  if (d <= 0) throw DomainError("radicand must be a positive integer");
  auto [k, t] = squarefree_split(d);
  b_ *= SurdNumber(Rational(k));
  if (t != 1 && base_ != 1) {
    // Of the two radicands t and sf(st) spanning the same extension, keep the
    // smaller: √t = (k'/s)·√s·√t' where s·t = k'²·t'.
    const auto [k2, t2] = squarefree_split(base_ * t);
    if (t2 < t) {
      b_ *= SurdNumber(Rational(0), Rational(k2, base_), base_);
      t = t2;
    }
  }
  if (t == 1) {
    a_ += b_;
    b_ = SurdNumber();
  } else if (t == base_) {
    a_ += b_ * SurdNumber::sqrt_of(t);
    b_ = SurdNumber();
  }
  base_ = common_radicand(a_.radicand(), b_.radicand());
  radicand_ = b_.is_zero() ? 1 : t;
}

int TowerNumber::sign() const {
  const int sa = a_.sign();
  const int sb = b_.sign();
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  const int c = (a_ * a_ - b_ * b_ * SurdNumber(Rational(radicand_))).sign();
  if (c > 0) return sa;
  if (c < 0) return sb;
  return 0;
}

TowerNumber TowerNumber::conjugate() const {
  TowerNumber out(*this);
  out.b_ = -out.b_;
  return out;
}

SurdNumber TowerNumber::norm() const { return a_ * a_ - b_ * b_ * SurdNumber(Rational(radicand_)); }

TowerNumber TowerNumber::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero");
  const SurdNumber inv_norm = norm().inverse();
  TowerNumber out(*this);
  out.a_ = a_ * inv_norm;
  out.b_ = -(b_ * inv_norm);
  out.base_ = common_radicand(out.a_.radicand(), out.b_.radicand());
  return out;
}

TowerNumber TowerNumber::operator-() const {
  TowerNumber out(*this);
  out.a_ = -out.a_;
  out.b_ = -out.b_;
  return out;
}

TowerNumber& TowerNumber::operator+=(const TowerNumber& y) {
  TowerNumber other = y;
  const std::int64_t s = common_radicand(base_, y.base_);
  if (radicand_ != 1 && s != base_) {
    base_ = s;
    canonicalize(radicand_);
  }
  if (other.radicand_ != 1 && s != other.base_) {
    other.base_ = s;
    other.canonicalize(other.radicand_);
  }
  const std::int64_t t = common_radicand(radicand_, other.radicand_);
  a_ += other.a_;
  b_ += other.b_;
  base_ = s;
  canonicalize(t);
  return *this;
}

TowerNumber& TowerNumber::operator-=(const TowerNumber& y) { return *this += -y; }

TowerNumber& TowerNumber::operator*=(const TowerNumber& y) {
  TowerNumber other = y;
  const std::int64_t s = common_radicand(base_, y.base_);
  if (radicand_ != 1 && s != base_) {
    base_ = s;
    canonicalize(radicand_);
  }
  if (other.radicand_ != 1 && s != other.base_) {
    other.base_ = s;
    other.canonicalize(other.radicand_);
  }
  const std::int64_t t = common_radicand(radicand_, other.radicand_);
  SurdNumber a = a_ * other.a_ + b_ * other.b_ * SurdNumber(Rational(t));
  SurdNumber b = a_ * other.b_ + b_ * other.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  base_ = common_radicand(s, common_radicand(a_.radicand(), b_.radicand()));
  canonicalize(t);
  return *this;
}

TowerNumber& TowerNumber::operator/=(const TowerNumber& y) { return *this *= y.inverse(); }

bool operator==(const TowerNumber& x, const TowerNumber& y) { return (x - y).is_zero(); }

std::strong_ordering operator<=>(const TowerNumber& x, const TowerNumber& y) {
  const int s = (x - y).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

BigInt floor(const TowerNumber& x) {
  if (x.b().is_zero()) return floor(x.a());
  const std::int64_t t = x.radicand();
  // B√t = B_a·√t + B_b·√(st); each piece is bracketed by an integer sqrt.
  const SurdNumber& b = x.b();
  Rational approx = rough(x.a()) + rough(b.a(), t);
  if (!b.is_rational()) approx += rough(b.b(), b.radicand() * t);
  BigInt k = floor_of(approx);
  while (x < TowerNumber(SurdNumber(Rational(k)))) k -= 1;
  while (x >= TowerNumber(SurdNumber(Rational(k + 1)))) k += 1;
  return k;
}

BigFloat TowerNumber::to_float(long precision_bits) const {
  if (b_.is_zero()) return a_.to_float(precision_bits);
  const long work = precision_bits + 40;
  BigFloat bt = b_.to_float(work);
  BigFloat root(work);
  mpfr_sqrt_ui(root.get(), static_cast<unsigned long>(radicand_), MPFR_RNDN);
  mpfr_mul(bt.get(), bt.get(), root.get(), MPFR_RNDN);
  BigFloat res(work);
  const int sa = a_.sign();
  if (sa == 0 || sa == b_.sign()) {
    BigFloat af = a_.to_float(work);
    mpfr_add(res.get(), af.get(), bt.get(), MPFR_RNDN);
  } else {
    BigFloat af = a_.to_float(work);
    BigFloat den(work);
    mpfr_sub(den.get(), af.get(), bt.get(), MPFR_RNDN);
    BigFloat num = norm().to_float(work);
    mpfr_div(res.get(), num.get(), den.get(), MPFR_RNDN);
  }
  BigFloat out(precision_bits);
  mpfr_set(out.get(), res.get(), MPFR_RNDN);
  return out;
}

Real TowerNumber::to_real() const { return to_float(kRealBits).to_real(); }

std::string TowerNumber::str() const {
  std::ostringstream os;
  os << "(" << a_.str() << ")";
  if (!b_.is_zero()) os << "+(" << b_.str() << ")*sqrt(" << radicand_ << ")";
  return os.str();
}

}  // namespace thetacf
