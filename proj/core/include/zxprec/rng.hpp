// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace zxprec {

// Counter-based generator built on the SplitMix64 finalizer: output i of a
// stream is mix(key + i*golden). Streams are derived from (seed, trial, user,
// role), so any trial can be generated in isolation and parallel runs are
// bit-identical to serial ones. Normal draws use explicit Box-Muller because
// std::normal_distribution is implementation-defined.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t trial,
                                  std::uint64_t user, std::uint64_t role);
  static CounterRng stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t user,
                           std::uint64_t role) {
    return CounterRng(derive_key(seed, trial, user, role));
  }

  std::uint64_t next_u64();
  double uniform();   // open interval (0, 1)
  double normal();    // standard normal

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace zxprec
