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

#ifndef PPTM_HASH_H_
#define PPTM_HASH_H_

#include <array>

#include "pptm/common.h"

namespace pptm {

using Digest = std::array<uint8_t, 32>;

Digest Sha256(BytesView data);

// Incremental SHA-256 over several chunks.
class Sha256Builder {
 public:
  Sha256Builder();
  ~Sha256Builder();
  Sha256Builder(const Sha256Builder&) = delete;
  Sha256Builder& operator=(const Sha256Builder&) = delete;

  Sha256Builder& Update(BytesView data);
  Sha256Builder& Update(std::string_view data);
  Sha256Builder& UpdateU32(uint32_t v);
  Sha256Builder& UpdateU64(uint64_t v);
  Digest Finish();

 private:
  void* ctx_;
};

}  // namespace pptm

#endif  // PPTM_HASH_H_
