#pragma once

#include "thetacf/real.hpp"

#include <cstdint>

namespace thetacf {

/// Counter-based SplitMix64 stream.
///
/// Stream k of master seed S starts at state mix(S) ⊕ mix(k + 1)·γ and
/// advances by the golden-ratio increment γ, so draw j of stream k depends
/// only on (S, k, j). Experiments give each sample its own stream, which
/// makes results independent of how samples are split across threads.
class CounterRng {
 public:
  CounterRng(std::uint64_t master_seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 113 random bits.
  Real uniform();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform_double();

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t state_;
};

}  // namespace thetacf
