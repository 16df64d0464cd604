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

#ifndef PPTM_MESSAGES_H_
#define PPTM_MESSAGES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pptm/bls.h"
#include "pptm/common.h"
#include "pptm/paillier.h"

namespace pptm::entities {

enum class Scheme { kPptm, kTrpm };

// R_r = ID_r || TS || TR || sigma_r
struct SpeedRequest {
  std::string rsu_id;
  int64_t ts = 0;  // simulated clock, milliseconds
  int64_t tr = 0;  // time range, milliseconds
  sig::Signature sigma;
  friend bool operator==(const SpeedRequest&, const SpeedRequest&) = default;
};

// R_j = PID_j || Y_j || C_j1 || C_j2 || TS || sigma_j
struct SpeedReport {
  Bytes pid;
  sig::VerifyKey y;
  paillier::Ciphertext c1;  // packed presence flags
  paillier::Ciphertext c2;  // packed speeds
  int64_t ts = 0;           // echoed request timestamp
  sig::Signature sigma;
  friend bool operator==(const SpeedReport&, const SpeedReport&) = default;
};

// ID_r || C_1 || C_2 || TS || sigma_r, plus the unsigned report count N.
struct AggregatedReport {
  std::string rsu_id;
  paillier::Ciphertext c1;
  paillier::Ciphertext c2;
  int64_t ts = 0;
  sig::Signature sigma;
  uint32_t n = 0;
  friend bool operator==(const AggregatedReport&,
                         const AggregatedReport&) = default;
};

// Baseline report carrying one ciphertext per road segment.
struct TrpmReport {
  Bytes pid;
  sig::VerifyKey y;
  std::vector<paillier::Ciphertext> c;
  int64_t ts = 0;
  sig::Signature sigma;
  friend bool operator==(const TrpmReport&, const TrpmReport&) = default;
};

struct TrpmAggregate {
  std::string rsu_id;
  std::vector<paillier::Ciphertext> c;
  int64_t ts = 0;
  sig::Signature sigma;
  uint32_t n = 0;
  friend bool operator==(const TrpmAggregate&, const TrpmAggregate&) = default;
};

}  // namespace pptm::entities

#endif  // PPTM_MESSAGES_H_
