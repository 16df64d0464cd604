/*
 * Copyright 2026 The PPTM Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PPTM_RNG_H_
#define PPTM_RNG_H_

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string_view>

#include "pptm/common.h"

namespace pptm {

// Seedable entropy source. Every draw is built from raw 64-bit engine output
// so streams are identical across platforms for a given seed.
//
// Not thread-safe; give each thread (or simulated entity) its own stream via
// Derive().
class Rng {
 public:
  explicit Rng(uint64_t seed);

  // Seeds from the OS entropy pool; for non-reproducible deployments.
  static Rng FromOs();

  // Independent child stream keyed by (this seed, label). Does not advance
  // this generator.
  Rng Derive(std::string_view label) const;
  static uint64_t DeriveSeed(uint64_t seed, std::string_view label);

  uint64_t NextU64();
  // Uniform in [0, bound); bound > 0.
  uint64_t Below(uint64_t bound);
  // Uniform in [0, 2^bits).
  mpz_class Bits(size_t bits);
  // Uniform in [0, bound); bound > 0.
  mpz_class Below(const mpz_class& bound);
  void Fill(std::span<uint8_t> out);

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace pptm

#endif  // PPTM_RNG_H_
