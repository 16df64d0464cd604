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

#ifndef PPTM_COMMON_H_
#define PPTM_COMMON_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pptm {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Wire or group-element bytes that do not parse.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Super-increasing packing cannot hold the requested values.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class SignatureError : public Error {
 public:
  using Error::Error;
};

class AggregationError : public Error {
 public:
  using Error::Error;
};

class UnknownPseudonymError : public Error {
 public:
  using Error::Error;
};

// Per-call-context operation tally. Callers own an instance and pass a
// pointer into the primitives they want to account for.
struct OpCounter {
  uint64_t exp_n2 = 0;       // exponentiations in Z_{n^2}
  uint64_t pairing = 0;      // pairing evaluations
  uint64_t mul_g = 0;        // scalar multiplications in G1
  uint64_t mul_n2 = 0;       // multiplications in Z_{n^2}
  uint64_t hash_to_group = 0;
  uint64_t add_g = 0;        // point additions in G1

  OpCounter& operator+=(const OpCounter& o) {
    exp_n2 += o.exp_n2;
    pairing += o.pairing;
    mul_g += o.mul_g;
    mul_n2 += o.mul_n2;
    hash_to_group += o.hash_to_group;
    add_g += o.add_g;
    return *this;
  }
  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

inline void Count(OpCounter* c, uint64_t OpCounter::*field, uint64_t n = 1) {
  if (c != nullptr) c->*field += n;
}

std::string ToHex(BytesView bytes);
Bytes FromHex(std::string_view hex);

inline Bytes ToBytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

}  // namespace pptm

#endif  // PPTM_COMMON_H_
