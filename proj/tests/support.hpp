#pragma once

#include <cstdint>
#include <random>

#include "wittlab/gf2k.hpp"

namespace testing_support {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed2025ULL);
  return gen;
}

inline std::uint32_t random_bits(const wittlab::FieldCtx& f) {
  return static_cast<std::uint32_t>(rng()() % f.size());
}

inline wittlab::Fel random_fel(const wittlab::FieldCtx& f) { return f(random_bits(f)); }

inline wittlab::Fel random_nonzero(const wittlab::FieldCtx& f) {
  while (true) {
    auto x = random_fel(f);
    if (!x.is_zero()) return x;
  }
}

// Carry-less product reduced bit by bit; kept separate from the library kernel.
inline std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, std::uint32_t modulus, int k) {
  std::uint64_t acc = 0;
  for (int i = 0; i < k; ++i) {
    if ((b >> i) & 1u) acc ^= static_cast<std::uint64_t>(a) << i;
  }
  for (int i = 2 * k - 2; i >= k; --i) {
    if ((acc >> i) & 1u) acc ^= static_cast<std::uint64_t>(modulus) << (i - k);
  }
  return static_cast<std::uint32_t>(acc);
}

}  // namespace testing_support
