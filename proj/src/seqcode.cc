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

#include "pptm/seqcode.h"

#include <string>

#include "pptm/bigint.h"

namespace pptm::seqcode {

namespace {

void CheckShape(uint64_t max_vehicles, uint64_t max_value) {
  if (max_vehicles == 0 || max_value == 0) {
    throw InvalidArgumentError("Q and V must be at least 1");
  }
}

}  // namespace

SuperIncreasingSeq Generate(size_t segments, uint64_t max_vehicles,
                            uint64_t max_value, const mpz_class& n_bound,
                            Rng& rng, GenOptions options) {
  if (segments == 0) throw InvalidArgumentError("M must be at least 1");
  CheckShape(max_vehicles, max_value);
  const mpz_class qv = FromU64(max_vehicles) * FromU64(max_value);
  SuperIncreasingSeq seq;
  seq.max_vehicles = max_vehicles;
  seq.max_value = max_value;
  seq.a.reserve(segments);
  mpz_class a1;
  do {
    a1 = rng.Bits(options.a1_bits);
  } while (a1 == 0);
  seq.a.push_back(a1);
  mpz_class prefix = a1;
  for (size_t j = 1; j < segments; ++j) {
    mpz_class aj = prefix * qv + 1 + rng.Bits(options.jitter_bits);
    seq.a.push_back(aj);
    prefix += aj;
  }
  CheckFits(seq, n_bound);
  return seq;
}

SuperIncreasingSeq FromWeights(std::vector<mpz_class> a, uint64_t max_vehicles,
                               uint64_t max_value) {
  if (a.empty()) throw InvalidArgumentError("M must be at least 1");
  CheckShape(max_vehicles, max_value);
  const mpz_class qv = FromU64(max_vehicles) * FromU64(max_value);
  mpz_class prefix = 0;
  for (size_t j = 0; j < a.size(); ++j) {
    if (a[j] <= 0) throw InvalidArgumentError("weights must be positive");
    if (j > 0 && prefix * qv >= a[j]) {
      throw InvalidArgumentError("weights are not super-increasing for Q*V");
    }
    prefix += a[j];
  }
  return SuperIncreasingSeq{std::move(a), max_vehicles, max_value};
}

mpz_class Capacity(const SuperIncreasingSeq& seq) {
  mpz_class sum = 0;
  for (const auto& ai : seq.a) sum += ai;
  return sum * FromU64(seq.max_vehicles) * FromU64(seq.max_value);
}

void CheckFits(const SuperIncreasingSeq& seq, const mpz_class& n_bound) {
  if (Capacity(seq) >= n_bound) {
    throw CapacityError(
        "super-increasing sequence does not fit under the Paillier modulus; "
        "increase kappa1 or reduce M*Q*V");
  }
}

uint64_t PerVehicleBound(const SuperIncreasingSeq& seq, Role role) {
  return role == Role::kFlags ? 1 : seq.max_value;
}

uint64_t AggregateBound(const SuperIncreasingSeq& seq, Role role) {
  return role == Role::kFlags ? seq.max_vehicles
                              : seq.max_vehicles * seq.max_value;
}

mpz_class Encode(const SuperIncreasingSeq& seq, std::span<const uint64_t> v,
                 Role role) {
  if (v.size() != seq.segments()) {
    throw InvalidArgumentError("segment vector length differs from M");
  }
  const uint64_t bound = PerVehicleBound(seq, role);
  mpz_class packed = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] > bound) {
      throw InvalidArgumentError("segment entry " + std::to_string(i + 1) +
                                 " exceeds its bound");
    }
    packed += seq.a[i] * FromU64(v[i]);
  }
  return packed;
}

SegmentVector Decode(const SuperIncreasingSeq& seq, const mpz_class& packed,
                     Role role) {
  if (packed < 0) throw CapacityError("negative packed aggregate");
  const uint64_t bound = AggregateBound(seq, role);
  const size_t m = seq.segments();
  SegmentVector out(m);
  mpz_class rest = packed;
  mpz_class component;
  for (size_t i = m; i-- > 0;) {
    if (i == 0) {
      if (!mpz_divisible_p(rest.get_mpz_t(), seq.a[0].get_mpz_t())) {
        throw CapacityError("packed aggregate is not an exact multiple of a_1");
      }
      component = rest / seq.a[0];
    } else {
      mpz_fdiv_qr(component.get_mpz_t(), rest.get_mpz_t(), rest.get_mpz_t(),
                  seq.a[i].get_mpz_t());
    }
    if (BitLength(component) > 64 || ToU64(component) > bound) {
      throw CapacityError("segment " + std::to_string(i + 1) +
                          " aggregate exceeds its capacity bound");
    }
    out[i] = ToU64(component);
  }
  return out;
}

}  // namespace pptm::seqcode
