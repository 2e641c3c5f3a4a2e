// Copyright (c) 2026 Morphguard Contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace morphguard {

/// Deterministic random source.  All distributions are implemented on top of
/// the raw 64-bit stream, so a given seed produces the same sequence on every
/// platform and toolchain (std::*_distribution would not guarantee that).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream derived from (seed, stream).  Used to give each
  /// simulated identity its own generator so that parallel generation is
  /// order-independent.
  static Rng substream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();

  /// Uniform on (0, 1].
  double uniform_pos();

  /// Uniform integer in [0, n).  n must be positive.
  std::uint64_t uniform_int(std::uint64_t n);

  /// Standard normal deviate (Box-Muller on the raw stream).
  double normal();

  /// Gamma(shape, 1) deviate for shape > 0 (Marsaglia-Tsang squeeze, with
  /// the power boost for shape < 1).
  double gamma(double shape);

  /// Beta(a, b) deviate for a, b > 0.
  double beta(double a, double b);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

/// splitmix64 mix of a single word; used for substream derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace morphguard
