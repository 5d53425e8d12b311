#pragma once

#include "thetacf/context.hpp"
#include "thetacf/expansion.hpp"
#include "thetacf/real.hpp"
#include "thetacf/surd.hpp"
#include "thetacf/tower.hpp"

#include <cstddef>
#include <cstdint>

namespace thetacf {

template <class T>
struct SquarePoint {
  T x;
  T y;
  friend bool operator==(const SquarePoint&, const SquarePoint&) = default;
};

/// T̄(x, y) = (T_θ(x), 1/(a_1(x)θ + y)); DomainError at x = 0.
template <class T>
SquarePoint<T> ext_map(const SquarePoint<T>& p, const ThetaContext& ctx);

/// T̄⁻¹(x, y) = (1/(a_1(y)θ + x), T_θ(y)); DomainError at y = 0.
template <class T>
SquarePoint<T> ext_inverse(const SquarePoint<T>& p, const ThetaContext& ctx);

/// Both sides of γ̄(T̄(I(i₁…i_n) × I(j₁…j_t))) = γ̄(I(i₁…i_n) × I(j₁…j_t)),
/// the image being I(i₂…i_n) × I(i₁, j₁…j_t).
struct RectanglePair {
  FundamentalInterval source_h;
  FundamentalInterval source_v;
  FundamentalInterval image_h;
  FundamentalInterval image_v;
};

RectanglePair image_rectangle(const DigitSequence& digits_h, const DigitSequence& digits_v, const ThetaContext& ctx);

/// |γ̄(image) − γ̄(source)| in binary128 from the exact endpoints.
Real preservation_check(const DigitSequence& digits_h, const DigitSequence& digits_v, const ThetaContext& ctx);

/// Exact comparison of the rectangle cross-ratios (ac+1)(bd+1)/((ad+1)(bc+1)).
bool preservation_exact(const DigitSequence& digits_h, const DigitSequence& digits_v, const ThetaContext& ctx);

struct PreservationSweep {
  std::size_t rectangles = 0;
  Real max_residual = 0;
  DigitSequence worst_h;
  DigitSequence worst_v;
};

/// All rectangles with 1 ≤ n ≤ max_depth horizontal digits, 0 ≤ t ≤
/// max_depth vertical digits, every digit in [m, m + max_offset].
PreservationSweep preservation_sweep(std::size_t max_depth, std::int64_t max_offset, const ThetaContext& ctx);

extern template SquarePoint<SurdNumber> ext_map(const SquarePoint<SurdNumber>&, const ThetaContext&);
extern template SquarePoint<TowerNumber> ext_map(const SquarePoint<TowerNumber>&, const ThetaContext&);
extern template SquarePoint<Real> ext_map(const SquarePoint<Real>&, const ThetaContext&);
extern template SquarePoint<SurdNumber> ext_inverse(const SquarePoint<SurdNumber>&, const ThetaContext&);
extern template SquarePoint<TowerNumber> ext_inverse(const SquarePoint<TowerNumber>&, const ThetaContext&);
extern template SquarePoint<Real> ext_inverse(const SquarePoint<Real>&, const ThetaContext&);

}  // namespace thetacf
