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

#ifndef PPTM_BIGINT_H_
#define PPTM_BIGINT_H_

#include <gmpxx.h>

#include <cstddef>

#include "pptm/common.h"

namespace pptm {

// Big-endian unsigned encoding, left padded to `width` bytes. Throws if the
// value does not fit.
Bytes ToFixedBytes(const mpz_class& v, size_t width);
// Minimal big-endian encoding; zero encodes as a single 0x00 byte.
Bytes ToMinimalBytes(const mpz_class& v);
mpz_class FromBytes(BytesView bytes);
mpz_class FromU64(uint64_t v);
// Throws InvalidArgumentError if v is negative or wider than 64 bits.
uint64_t ToU64(const mpz_class& v);

size_t BitLength(const mpz_class& v);
inline size_t ByteLength(const mpz_class& v) { return (BitLength(v) + 7) / 8; }

std::string ToHexString(const mpz_class& v);
mpz_class FromHexString(std::string_view hex);

}  // namespace pptm

#endif  // PPTM_BIGINT_H_
