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

#ifndef PPTM_SEQCODE_H_
#define PPTM_SEQCODE_H_

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

#include "pptm/common.h"
#include "pptm/rng.h"

// Super-increasing packing of per-segment values into one integer.
//
// With weights a_1 < ... < a_M satisfying
//     sum_{i<j} a_i * Q * V < a_j,
// any sum of at most Q vectors whose entries are bounded by V packs as
// sum_i a_i * s_i and is recovered exactly by peeling residues from a_M down.
namespace pptm::seqcode {

// Presence flags are bounded by 1 per vehicle (Q per aggregate); speeds by V
// per vehicle (Q * V per aggregate).
enum class Role { kFlags, kSpeeds };

using SegmentVector = std::vector<uint64_t>;

struct SuperIncreasingSeq {
  std::vector<mpz_class> a;
  uint64_t max_vehicles = 0;  // Q
  uint64_t max_value = 0;     // V

  size_t segments() const { return a.size(); }
  friend bool operator==(const SuperIncreasingSeq&,
                         const SuperIncreasingSeq&) = default;
};

struct GenOptions {
  unsigned a1_bits = 16;      // a_1 drawn from [1, 2^a1_bits)
  unsigned jitter_bits = 16;  // a_j = (sum_{i<j} a_i) Q V + 1 + jitter
};

// Throws InvalidArgumentError for M, Q or V of zero and CapacityError when
// sum a_i Q V would reach n_bound.
SuperIncreasingSeq Generate(size_t segments, uint64_t max_vehicles,
                            uint64_t max_value, const mpz_class& n_bound,
                            Rng& rng, GenOptions options = {});

// Adopts explicit weights after checking the super-increasing invariant.
SuperIncreasingSeq FromWeights(std::vector<mpz_class> a, uint64_t max_vehicles,
                               uint64_t max_value);

// sum_i a_i * Q * V: the largest packed aggregate.
mpz_class Capacity(const SuperIncreasingSeq& seq);
// Throws CapacityError unless Capacity(seq) < n_bound.
void CheckFits(const SuperIncreasingSeq& seq, const mpz_class& n_bound);

uint64_t PerVehicleBound(const SuperIncreasingSeq& seq, Role role);
uint64_t AggregateBound(const SuperIncreasingSeq& seq, Role role);

// sum_i a_i v_i for one vehicle's vector; entries above the per-vehicle
// bound throw InvalidArgumentError.
mpz_class Encode(const SuperIncreasingSeq& seq, std::span<const uint64_t> v,
                 Role role);

// Recovers per-segment sums. Throws CapacityError if the peeling leaves a
// non-exact final division or a component above the aggregate bound.
SegmentVector Decode(const SuperIncreasingSeq& seq, const mpz_class& packed,
                     Role role);

}  // namespace pptm::seqcode

#endif  // PPTM_SEQCODE_H_
