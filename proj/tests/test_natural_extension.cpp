#include "doctest.h"

#include "thetacf/errors.hpp"
#include "thetacf/measures.hpp"
#include "thetacf/natural_extension.hpp"

#include <random>

using namespace thetacf;

namespace {

double d(const Real& x) { return x.convert_to<double>(); }

SurdNumber random_in_square(std::mt19937_64& gen, const ThetaContext& ctx) {
  std::uniform_int_distribution<long> num(1, 500);
  std::uniform_int_distribution<long> den(2, 700);
  const SurdNumber y(Rational(num(gen), den(gen)), Rational(num(gen), den(gen)), ctx.m());
  return split_integer_part(y, ctx).second;
}

}  // namespace

TEST_CASE("extended map examples") {
  const ThetaContext c1(1), c4(4);
  const SquarePoint<SurdNumber> p{SurdNumber(Rational(1, 2)), SurdNumber(0L)};
  const auto q = ext_map(p, c1);
  CHECK(q.x.is_zero());
  CHECK(q.y == SurdNumber(Rational(1, 2)));
  CHECK(ext_inverse(q, c1) == p);

  const SquarePoint<SurdNumber> r{SurdNumber(Rational(3, 10)), SurdNumber(Rational(1, 4))};
  const auto r1 = ext_map(r, c4);
  CHECK(r1.x == SurdNumber(Rational(1, 3)));
  CHECK(r1.y == SurdNumber(Rational(1)) / SurdNumber(Rational(13, 4)));  // 1/(6·½ + ¼)
  CHECK_THROWS_AS(ext_map(SquarePoint<SurdNumber>{SurdNumber(0L), SurdNumber(0L)}, c1), DomainError);
  CHECK_THROWS_AS(ext_inverse(SquarePoint<SurdNumber>{SurdNumber(0L), SurdNumber(0L)}, c1), DomainError);
  CHECK_THROWS_AS(ext_map(SquarePoint<SurdNumber>{SurdNumber(2L), SurdNumber(0L)}, c1), DomainError);
}

TEST_CASE("extended map is a bijection on random points") {
  std::mt19937_64 gen(8675309);
  for (std::int64_t m : {1, 2, 3, 6}) {
    const ThetaContext ctx(m);
    for (int trial = 0; trial < 40; ++trial) {
      const SquarePoint<SurdNumber> p{random_in_square(gen, ctx), random_in_square(gen, ctx)};
      if (p.x.is_zero()) continue;
      const auto q = ext_map(p, ctx);
      CHECK(ext_inverse(q, ctx) == p);
      CHECK(q.y > SurdNumber(0L));
      CHECK(q.y <= ctx.theta());
      if (!p.y.is_zero()) CHECK(ext_map(ext_inverse(p, ctx), ctx) == p);
      const SquarePoint<Real> pr{p.x.to_real(), p.y.to_real()};
      const auto qr = ext_map(pr, ctx);
      CHECK(d(fabs(qr.x - q.x.to_real())) < 1e-25);
      CHECK(d(fabs(qr.y - q.y.to_real())) < 1e-25);
    }
  }
}

TEST_CASE("tower points follow the extended map") {
  const ThetaContext c1(1);
  const TowerNumber g(SurdNumber(Rational(-1, 2)), SurdNumber(Rational(1, 2)), 5);
  const SquarePoint<TowerNumber> p{g, g};
  CHECK(ext_map(p, c1) == p);  // (g, g) with g = [1, 1, …] is a fixed point
}

TEST_CASE("image rectangles") {
  const ThetaContext c2(2);
  const auto pair = image_rectangle(DigitSequence::from({3, 2}), DigitSequence::from({4}), c2);
  CHECK(pair.image_h.digits.digits == DigitSequence::from({2}).digits);
  CHECK(pair.image_v.digits.digits == DigitSequence::from({3, 4}).digits);
  // I(i₁) × [0, θ] maps onto [0, θ] × I(i₁).
  const auto full = image_rectangle(DigitSequence::from({5}), DigitSequence{}, c2);
  CHECK(full.image_h.lower.is_zero());
  CHECK(full.image_h.upper == c2.theta());
  CHECK(full.source_v.upper == c2.theta());
  CHECK(full.image_v.lower == full.source_h.lower);
  CHECK(full.image_v.upper == full.source_h.upper);
  CHECK_THROWS_AS(image_rectangle(DigitSequence{}, DigitSequence{}, c2), DomainError);
}

TEST_CASE("rectangle images preserve the extended measure") {
  for (std::int64_t m : {1, 2, 3, 5}) {
    const ThetaContext ctx(m);
    const auto h = DigitSequence::from({m + 1, m, m + 4});
    const auto v = DigitSequence::from({m + 2, m + 3});
    CHECK(preservation_exact(h, v, ctx));
    CHECK(d(preservation_check(h, v, ctx)) < 1e-30);
    const auto pair = image_rectangle(h, v, ctx);
    const Real before = extended_rectangle(pair.source_h.lower.to_real(), pair.source_h.upper.to_real(),
                                           pair.source_v.lower.to_real(), pair.source_v.upper.to_real(), ctx);
    CHECK(before > 0);
  }
}

TEST_CASE("sweep over all short words") {
  const ThetaContext ctx(2);
  const PreservationSweep sweep = preservation_sweep(2, 2, ctx);
  // n ∈ {1, 2} and t ∈ {0, 1, 2} with three digit choices each.
  CHECK(sweep.rectangles == (3 + 9) * (1 + 3 + 9));
  CHECK(d(sweep.max_residual) < 1e-30);
  CHECK_FALSE(sweep.worst_h.empty());
  CHECK_THROWS_AS(preservation_sweep(0, 2, ctx), ValidationError);
  CHECK_THROWS_AS(preservation_sweep(2, -1, ctx), ValidationError);
}

TEST_CASE("a perturbed rectangle does not preserve measure") {
  // Sanity check on the comparison itself: the image of I(i₁) × [0, θ] has
  // the same measure only when paired correctly.
  const ThetaContext ctx(1);
  const auto a = image_rectangle(DigitSequence::from({2}), DigitSequence{}, ctx);
  const auto b = image_rectangle(DigitSequence::from({3}), DigitSequence{}, ctx);
  const Real src = extended_rectangle(a.source_h.lower.to_real(), a.source_h.upper.to_real(),
                                      a.source_v.lower.to_real(), a.source_v.upper.to_real(), ctx);
  const Real wrong = extended_rectangle(b.image_h.lower.to_real(), b.image_h.upper.to_real(),
                                        b.image_v.lower.to_real(), b.image_v.upper.to_real(), ctx);
  CHECK(d(fabs(src - wrong)) > 1e-3);
}
