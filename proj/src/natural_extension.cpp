#include "thetacf/natural_extension.hpp"

#include "thetacf/errors.hpp"
#include "thetacf/measures.hpp"

#include <functional>
#include <map>
#include <vector>

namespace thetacf {

namespace {

// One branch of the map in the requested arithmetic: (T_θ(v), digit of v).
template <class T>
std::pair<T, T> digit_and_image(const T& v, const ThetaContext& ctx);

template <>
std::pair<Real, Real> digit_and_image(const Real& v, const ThetaContext& ctx) {
  const RealStep step = gauss_step(v, ctx);
  return {step.next, step.digit};
}

template <class Exact>
std::pair<Exact, Exact> exact_digit_and_image(const Exact& v, const ThetaContext& ctx) {
  const auto digit = first_digit(v, ctx);
  const Exact next = gauss_map(v, ctx);
  return {next, Exact(SurdNumber(Rational(*digit)))};
}

template <>
std::pair<SurdNumber, SurdNumber> digit_and_image(const SurdNumber& v, const ThetaContext& ctx) {
  return exact_digit_and_image(v, ctx);
}

template <>
std::pair<TowerNumber, TowerNumber> digit_and_image(const TowerNumber& v, const ThetaContext& ctx) {
  return exact_digit_and_image(v, ctx);
}

template <class T>
T theta_as(const ThetaContext& ctx) {
  if constexpr (std::is_same_v<T, Real>) {
    return ctx.theta_r();
  } else {
    return T(ctx.theta());
  }
}

template <class T>
bool is_null(const T& v) {
  if constexpr (std::is_same_v<T, Real>) {
    return v == 0;
  } else {
    return v.is_zero();
  }
}

template <class T>
void require_square(const SquarePoint<T>& p, const ThetaContext& ctx) {
  const T theta = theta_as<T>(ctx);
  const T zero(0L);
  if (p.x < zero || p.x > theta || p.y < zero || p.y > theta) throw DomainError("point outside [0, theta]^2");
}

Real rectangle_measure(const FundamentalInterval& h, const FundamentalInterval& v, const ThetaContext& ctx) {
  return extended_rectangle(h.lower.to_real(), h.upper.to_real(), v.lower.to_real(), v.upper.to_real(), ctx);
}

SurdNumber cross_ratio(const FundamentalInterval& h, const FundamentalInterval& v) {
  const SurdNumber one(1L);
  const auto& a = h.lower;
  const auto& b = h.upper;
  const auto& c = v.lower;
  const auto& d = v.upper;
  return (a * c + one) * (b * d + one) / ((a * d + one) * (b * c + one));
}

}  // namespace

template <class T>
SquarePoint<T> ext_map(const SquarePoint<T>& p, const ThetaContext& ctx) {
  require_square(p, ctx);
  if (is_null(p.x)) throw DomainError("ext_map: first digit of x = 0 is infinite");
  auto [next, digit] = digit_and_image(p.x, ctx);
  T y = T(1L) / (digit * theta_as<T>(ctx) + p.y);
  if constexpr (std::is_same_v<T, Real>) {
    if (y > ctx.theta_r()) y = ctx.theta_r();
  }
  return {next, y};
}

template <class T>
SquarePoint<T> ext_inverse(const SquarePoint<T>& p, const ThetaContext& ctx) {
  require_square(p, ctx);
  if (is_null(p.y)) throw DomainError("ext_inverse: first digit of y = 0 is infinite");
  auto [next, digit] = digit_and_image(p.y, ctx);
  T x = T(1L) / (digit * theta_as<T>(ctx) + p.x);
  if constexpr (std::is_same_v<T, Real>) {
    if (x > ctx.theta_r()) x = ctx.theta_r();
  }
  return {x, next};
}

RectanglePair image_rectangle(const DigitSequence& digits_h, const DigitSequence& digits_v, const ThetaContext& ctx) {
  if (digits_h.empty()) throw DomainError("preservation check needs at least one horizontal digit");
  RectanglePair out;
  out.source_h = fundamental_interval(digits_h, ctx);
  out.source_v = fundamental_interval(digits_v, ctx);
  DigitSequence shifted;
  shifted.digits.assign(digits_h.digits.begin() + 1, digits_h.digits.end());
  DigitSequence prepended;
  prepended.digits.push_back(digits_h.digits.front());
  prepended.digits.insert(prepended.digits.end(), digits_v.digits.begin(), digits_v.digits.end());
  out.image_h = fundamental_interval(shifted, ctx);
  out.image_v = fundamental_interval(prepended, ctx);
  return out;
}

Real preservation_check(const DigitSequence& digits_h, const DigitSequence& digits_v, const ThetaContext& ctx) {
  const RectanglePair r = image_rectangle(digits_h, digits_v, ctx);
  return fabs(rectangle_measure(r.image_h, r.image_v, ctx) - rectangle_measure(r.source_h, r.source_v, ctx));
}

bool preservation_exact(const DigitSequence& digits_h, const DigitSequence& digits_v, const ThetaContext& ctx) {
  const RectanglePair r = image_rectangle(digits_h, digits_v, ctx);
  return cross_ratio(r.image_h, r.image_v) == cross_ratio(r.source_h, r.source_v);
}

PreservationSweep preservation_sweep(std::size_t max_depth, std::int64_t max_offset, const ThetaContext& ctx) {
  if (max_depth < 1) throw ValidationError("sweep depth must be at least 1");
  if (max_offset < 0) throw ValidationError("digit offset must be non-negative");
  using Word = std::vector<std::int64_t>;
  // Endpoints of every interval the sweep touches: images prepend one digit,
  // so words run up to length max_depth + 1.
  std::map<Word, std::pair<Real, Real>> endpoints;
  std::vector<Word> words{Word{}};
  std::vector<Word> frontier{Word{}};
  for (std::size_t len = 0; len <= max_depth; ++len) {
    std::vector<Word> next;
    for (const auto& w : frontier) {
      for (std::int64_t d = ctx.m(); d <= ctx.m() + max_offset; ++d) {
        Word longer = w;
        longer.push_back(d);
        next.push_back(std::move(longer));
      }
    }
    if (len < max_depth) words.insert(words.end(), next.begin(), next.end());
    frontier = std::move(next);
    for (const auto& w : words) {
      if (!endpoints.count(w)) {
        const auto iv = fundamental_interval(DigitSequence::from(w), ctx);
        endpoints.emplace(w, std::make_pair(iv.lower.to_real(), iv.upper.to_real()));
      }
    }
  }
  for (const auto& w : frontier) {
    const auto iv = fundamental_interval(DigitSequence::from(w), ctx);
    endpoints.emplace(w, std::make_pair(iv.lower.to_real(), iv.upper.to_real()));
  }
  auto measure = [&](const Word& h, const Word& v) {
    const auto& [a, b] = endpoints.at(h);
    const auto& [c, d] = endpoints.at(v);
    return extended_rectangle(a, b, c, d, ctx);
  };

  PreservationSweep out;
  for (const auto& h : words) {
    if (h.empty()) continue;
    const Word shifted(h.begin() + 1, h.end());
    for (const auto& v : words) {
      Word prepended{h.front()};
      prepended.insert(prepended.end(), v.begin(), v.end());
      const Real r = fabs(measure(shifted, prepended) - measure(h, v));
      ++out.rectangles;
      if (r > out.max_residual || out.rectangles == 1) {
        out.max_residual = r;
        out.worst_h = DigitSequence::from(h);
        out.worst_v = DigitSequence::from(v);
      }
    }
  }
  return out;
}

template SquarePoint<SurdNumber> ext_map(const SquarePoint<SurdNumber>&, const ThetaContext&);
template SquarePoint<TowerNumber> ext_map(const SquarePoint<TowerNumber>&, const ThetaContext&);
template SquarePoint<Real> ext_map(const SquarePoint<Real>&, const ThetaContext&);
template SquarePoint<SurdNumber> ext_inverse(const SquarePoint<SurdNumber>&, const ThetaContext&);
template SquarePoint<TowerNumber> ext_inverse(const SquarePoint<TowerNumber>&, const ThetaContext&);
template SquarePoint<Real> ext_inverse(const SquarePoint<Real>&, const ThetaContext&);

}  // namespace thetacf
