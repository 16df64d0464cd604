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

#ifndef PPTM_WIRE_H_
#define PPTM_WIRE_H_

#include <cstdint>
#include <vector>

#include "pptm/common.h"
#include "pptm/messages.h"
#include "pptm/pairing.h"
#include "pptm/paillier.h"

// Wire format shared by every protocol message:
//
//   message := tag:u8 field*
//   field   := length:u32be bytes[length]
//
// Fields appear in the exact order the protocol signs them, and the signed
// byte string is the concatenation of the serialized (length-prefixed)
// signed fields. Integers are big-endian; group elements use the compressed
// encoding from pairing.h; ciphertexts are fixed width (bytes of n^2).
namespace pptm::wire {

enum class Tag : uint8_t {
  kSpeedRequest = 0x01,
  kSpeedReport = 0x02,
  kAggregatedReport = 0x03,
  kTrpmReport = 0x04,
  kTrpmAggregate = 0x05,
};

struct Frame {
  Tag tag{};
  std::vector<Bytes> fields;
};

Bytes SerializeFrame(const Frame& frame);
// Throws DecodeError on unknown tag or truncated fields.
Frame ParseFrame(BytesView bytes);

// Concatenation of length-prefixed fields.
Bytes JoinFields(std::span<const Bytes> fields);

Bytes EncodeTimestamp(int64_t ts);
int64_t DecodeTimestamp(BytesView bytes);

// Bits of protocol payload in a frame: every signed field plus the
// signature. Tag byte, length prefixes and the unsigned report count of an
// aggregate are framing and are not counted.
uint64_t PayloadBits(const Frame& frame);
uint64_t FramingBits(const Frame& frame);

// Widths (bits) of the fields that make up the bandwidth closed forms.
struct FieldWidths {
  uint64_t pid_bits = 0;
  uint64_t rsu_id_bits = 0;
  uint64_t group_bits = 0;
  uint64_t ciphertext_bits = 0;
  uint64_t ts_bits = 0;

  // |PID| = |TS| = 100, |G| = 160, |C| = 2048; |ID_r| taken as 100.
  static FieldWidths Reference();
};

// Vehicle-to-RSU: |PID| + |G| + k |C| + |TS| + |G| with k = 2 (PPTM) or
// k = M (TRPM).
uint64_t VehicleReportBits(const FieldWidths& w, entities::Scheme scheme,
                           size_t segments);
// RSU-to-SP: |ID_r| + k |C| + |TS| + |G|.
uint64_t AggregateBits(const FieldWidths& w, entities::Scheme scheme,
                       size_t segments);

class Codec {
 public:
  Codec(pairing::GroupParams group, paillier::PublicKey pk);

  Frame ToFrame(const entities::SpeedRequest& m) const;
  Frame ToFrame(const entities::SpeedReport& m) const;
  Frame ToFrame(const entities::AggregatedReport& m) const;
  Frame ToFrame(const entities::TrpmReport& m) const;
  Frame ToFrame(const entities::TrpmAggregate& m) const;

  template <typename Message>
  Bytes Encode(const Message& m) const {
    return SerializeFrame(ToFrame(m));
  }

  // Decoders validate every field (group membership, ciphertext range) and
  // throw DecodeError on any malformed content.
  entities::SpeedRequest DecodeRequest(BytesView bytes) const;
  entities::SpeedReport DecodeReport(BytesView bytes) const;
  entities::AggregatedReport DecodeAggregate(BytesView bytes) const;
  entities::TrpmReport DecodeTrpmReport(BytesView bytes) const;
  entities::TrpmAggregate DecodeTrpmAggregate(BytesView bytes) const;

  // Byte strings covered by each message's signature.
  Bytes SignedBytes(const entities::SpeedRequest& m) const;
  Bytes SignedBytes(const entities::SpeedReport& m) const;
  Bytes SignedBytes(const entities::AggregatedReport& m) const;
  Bytes SignedBytes(const entities::TrpmReport& m) const;
  Bytes SignedBytes(const entities::TrpmAggregate& m) const;

  Bytes EncodeCiphertext(const paillier::Ciphertext& c) const;
  paillier::Ciphertext DecodeCiphertext(BytesView bytes) const;
  Bytes EncodePoint(const pairing::G1Point& p) const;
  pairing::G1Point DecodePoint(BytesView bytes) const;

  // Widths produced by this codec for given identifier lengths.
  FieldWidths Widths(size_t pid_bytes, size_t rsu_id_bytes) const;

  const pairing::GroupParams& group() const { return group_; }
  const paillier::PublicKey& pk() const { return pk_; }

 private:
  pairing::GroupParams group_;
  paillier::PublicKey pk_;
  size_t ciphertext_bytes_;
};

}  // namespace pptm::wire

#endif  // PPTM_WIRE_H_
