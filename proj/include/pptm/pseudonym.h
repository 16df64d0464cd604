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

#ifndef PPTM_PSEUDONYM_H_
#define PPTM_PSEUDONYM_H_

#include <array>
#include <optional>
#include <string>

#include "pptm/common.h"
#include "pptm/rng.h"

// Deterministic authenticated encryption of (vehicle identity || per-pseudonym
// secret) under the authority's tracing key k0, using AES-256-SIV.
namespace pptm::pseudonym {

inline constexpr size_t kTracingKeyBytes = 64;
inline constexpr size_t kSivTagBytes = 16;

struct TracingKey {
  std::array<uint8_t, kTracingKeyBytes> bytes{};
  static TracingKey Generate(Rng& rng);
};

struct Opened {
  std::string identity;
  Bytes secret;
};

// PID = SIV tag || AES-CTR(identity_len:u8 || identity || secret).
Bytes Seal(const TracingKey& k0, std::string_view identity, BytesView secret);

// Returns nullopt if the PID was not produced under k0 or was modified.
std::optional<Opened> Open(const TracingKey& k0, BytesView pid);

}  // namespace pptm::pseudonym

#endif  // PPTM_PSEUDONYM_H_
