// SPDX-License-Identifier: Apache-2.0
#include "zxprec/rng.hpp"

#include <cmath>

namespace zxprec {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

std::uint64_t CounterRng::derive_key(std::uint64_t seed, std::uint64_t trial,
                                     std::uint64_t user, std::uint64_t role) {
  std::uint64_t k = mix64(seed + kGolden);
  k = mix64(k ^ (trial + 0xD1B54A32D192ED03ULL));
  k = mix64(k ^ (user + 0x8CB92BA72F3D8DD7ULL));
  k = mix64(k ^ (role + 0xA24BAED4963EE407ULL));
  return k;
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() {
  // 53 random bits, offset by half an ulp: values lie strictly inside (0,1),
  // so logs in Box-Muller are safe.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double CounterRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.28318530717958647692 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

}  // namespace zxprec
