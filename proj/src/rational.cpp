#include "thetacf/rational.hpp"

#include "thetacf/errors.hpp"

#include <cctype>
#include <limits>

namespace thetacf {

BigInt floor_of(const Rational& q) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

bool perfect_square(const BigInt& n, BigInt* root) {
  if (sgn(n) < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  if (root != nullptr) mpz_sqrt(root->get_mpz_t(), n.get_mpz_t());
  return true;
}

int sign_of(const Rational& q) { return sgn(q); }

std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t n) {
  if (n <= 0) throw DomainError("squarefree_split: radicand must be positive");
  std::int64_t k = 1;
  std::int64_t s = 1;
  std::int64_t rest = n;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) k *= p;
    if (e % 2 == 1) s *= p;
  }
  s *= rest;
  return {k, s};
}

Rational parse_rational(const std::string& text) {
  auto valid_int = [](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
  };
  auto strip_plus = [](std::string s) { return (!s.empty() && s[0] == '+') ? s.substr(1) : s; };
  const auto slash = text.find('/');
  const std::string num = text.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
    throw ValidationError("malformed rational '" + text + "'");
  }
  BigInt n(strip_plus(num));
  BigInt d(den);
  if (sgn(d) == 0) throw ValidationError("zero denominator in '" + text + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const BigInt& z) { return z.get_str(); }

std::int64_t to_int64(const BigInt& z) {
  if (!mpz_fits_slong_p(z.get_mpz_t())) throw NumericError("integer " + z.get_str() + " exceeds 64 bits");
  return static_cast<std::int64_t>(mpz_get_si(z.get_mpz_t()));
}

}  // namespace thetacf
