#include "thetacf/rng.hpp"

#include <cmath>

namespace thetacf {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t master_seed, std::uint64_t stream)
    : state_(mix(master_seed) ^ (mix(stream + 1) * kGolden)) {}

std::uint64_t CounterRng::next_u64() {
  state_ += kGolden;
  return mix(state_);
}

Real CounterRng::uniform() {
  const std::uint64_t hi = next_u64() >> 15;  // 49 bits
  const std::uint64_t lo = next_u64();        // 64 bits
  const Real value = Real(hi) * Real(18446744073709551616.0) + Real(lo);
  return ldexp(value, -113);
}

double CounterRng::uniform_double() { return std::ldexp(static_cast<double>(next_u64() >> 11), -53); }

}  // namespace thetacf
