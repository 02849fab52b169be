//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_RNG_H_
#define FABIND_RNG_H_

#include <cstdint>
#include <random>
#include <string>

namespace fabind {

// The single source of randomness. Every stochastic component draws from an
// Rng passed in by reference, so a fixed seed fixes the whole trajectory.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) { }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on the closed range [lo, hi].
  int uniform_int(int lo, int hi);

  // Standard normal via Box-Muller (no cached second value, so the stream
  // position only depends on the number of calls).
  double normal();

  std::uint64_t next_u64() { return engine_(); }

  std::string serialize() const;
  void deserialize(const std::string &state);

  bool operator==(const Rng &other) const { return engine_ == other.engine_; }

private:
  std::mt19937_64 engine_;
};

}  // namespace fabind

#endif  // FABIND_RNG_H_
