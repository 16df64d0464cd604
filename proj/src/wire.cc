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

#include "pptm/wire.h"

#include "pptm/bigint.h"

namespace pptm::wire {

namespace {

using entities::AggregatedReport;
using entities::Scheme;
using entities::SpeedReport;
using entities::SpeedRequest;
using entities::TrpmAggregate;
using entities::TrpmReport;

constexpr size_t kLengthPrefix = 4;
constexpr size_t kTimestampBytes = 8;

void AppendU32(Bytes& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<uint8_t>(v >> shift));
  }
}

bool KnownTag(uint8_t t) { return t >= 0x01 && t <= 0x05; }

// Number of trailing fields that are framing metadata rather than payload.
size_t TrailingMetadata(Tag tag) {
  return tag == Tag::kAggregatedReport || tag == Tag::kTrpmAggregate ? 1 : 0;
}

Bytes EncodeCount(uint32_t n) {
  Bytes out;
  AppendU32(out, n);
  return out;
}

uint32_t DecodeCount(BytesView b) {
  if (b.size() != 4) throw DecodeError("report count must be 4 bytes");
  return static_cast<uint32_t>(b[0]) << 24 | static_cast<uint32_t>(b[1]) << 16 |
         static_cast<uint32_t>(b[2]) << 8 | b[3];
}

std::string DecodeId(BytesView b) {
  if (b.empty()) throw DecodeError("empty identifier");
  return std::string(b.begin(), b.end());
}

Frame Expect(BytesView bytes, Tag tag, size_t min_fields, size_t max_fields) {
  Frame f = ParseFrame(bytes);
  if (f.tag != tag) throw DecodeError("unexpected message tag");
  if (f.fields.size() < min_fields || f.fields.size() > max_fields) {
    throw DecodeError("unexpected field count");
  }
  return f;
}

// The signed prefix of a frame: everything except the signature and any
// trailing metadata.
Bytes SignedPrefix(const Frame& f) {
  size_t end = f.fields.size() - 1 - TrailingMetadata(f.tag);
  return JoinFields(std::span<const Bytes>(f.fields.data(), end));
}

}  // namespace

Bytes SerializeFrame(const Frame& frame) {
  Bytes out;
  out.push_back(static_cast<uint8_t>(frame.tag));
  Bytes body = JoinFields(frame.fields);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Frame ParseFrame(BytesView bytes) {
  if (bytes.empty()) throw DecodeError("empty message");
  if (!KnownTag(bytes[0])) throw DecodeError("unknown message tag");
  Frame f;
  f.tag = static_cast<Tag>(bytes[0]);
  size_t pos = 1;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < kLengthPrefix) {
      throw DecodeError("truncated length prefix");
    }
    uint32_t len = DecodeCount(bytes.subspan(pos, kLengthPrefix));
    pos += kLengthPrefix;
    if (bytes.size() - pos < len) throw DecodeError("truncated field");
    f.fields.emplace_back(bytes.begin() + pos, bytes.begin() + pos + len);
    pos += len;
  }
  return f;
}

Bytes JoinFields(std::span<const Bytes> fields) {
  Bytes out;
  for (const Bytes& field : fields) {
    AppendU32(out, static_cast<uint32_t>(field.size()));
    out.insert(out.end(), field.begin(), field.end());
  }
  return out;
}

Bytes EncodeTimestamp(int64_t ts) {
  Bytes out(kTimestampBytes);
  uint64_t u = static_cast<uint64_t>(ts);
  for (size_t i = 0; i < kTimestampBytes; ++i) {
    out[i] = static_cast<uint8_t>(u >> (56 - 8 * i));
  }
  return out;
}

int64_t DecodeTimestamp(BytesView bytes) {
  if (bytes.size() != kTimestampBytes) {
    throw DecodeError("timestamp must be 8 bytes");
  }
  uint64_t u = 0;
  for (uint8_t b : bytes) u = u << 8 | b;
  return static_cast<int64_t>(u);
}

uint64_t PayloadBits(const Frame& frame) {
  uint64_t bits = 0;
  size_t end = frame.fields.size() - TrailingMetadata(frame.tag);
  for (size_t i = 0; i < end; ++i) bits += 8 * frame.fields[i].size();
  return bits;
}

uint64_t FramingBits(const Frame& frame) {
  return 8 * SerializeFrame(frame).size() - PayloadBits(frame);
}

FieldWidths FieldWidths::Reference() {
  return FieldWidths{.pid_bits = 100,
                     .rsu_id_bits = 100,
                     .group_bits = 160,
                     .ciphertext_bits = 2048,
                     .ts_bits = 100};
}

uint64_t VehicleReportBits(const FieldWidths& w, Scheme scheme,
                           size_t segments) {
  uint64_t k = scheme == Scheme::kPptm ? 2 : segments;
  return w.pid_bits + w.group_bits + k * w.ciphertext_bits + w.ts_bits +
         w.group_bits;
}

uint64_t AggregateBits(const FieldWidths& w, Scheme scheme, size_t segments) {
  uint64_t k = scheme == Scheme::kPptm ? 2 : segments;
  return w.rsu_id_bits + k * w.ciphertext_bits + w.ts_bits + w.group_bits;
}

// ---- Codec ----

Codec::Codec(pairing::GroupParams group, paillier::PublicKey pk)
    : group_(std::move(group)),
      pk_(std::move(pk)),
      ciphertext_bytes_(paillier::CiphertextBytes(pk_)) {}

Bytes Codec::EncodeCiphertext(const paillier::Ciphertext& c) const {
  return ToFixedBytes(c.value, ciphertext_bytes_);
}

paillier::Ciphertext Codec::DecodeCiphertext(BytesView bytes) const {
  if (bytes.size() != ciphertext_bytes_) {
    throw DecodeError("ciphertext has wrong width");
  }
  paillier::Ciphertext c{FromBytes(bytes)};
  if (!paillier::IsValidCiphertext(pk_, c)) {
    throw DecodeError("ciphertext is not a unit mod n^2");
  }
  return c;
}

Bytes Codec::EncodePoint(const pairing::G1Point& p) const {
  return pairing::EncodePoint(group_, p);
}

pairing::G1Point Codec::DecodePoint(BytesView bytes) const {
  return pairing::DecodePoint(group_, bytes);
}

FieldWidths Codec::Widths(size_t pid_bytes, size_t rsu_id_bytes) const {
  return FieldWidths{.pid_bits = 8 * pid_bytes,
                     .rsu_id_bits = 8 * rsu_id_bytes,
                     .group_bits = 8 * pairing::PointBytes(group_),
                     .ciphertext_bits = 8 * ciphertext_bytes_,
                     .ts_bits = 8 * kTimestampBytes};
}

Frame Codec::ToFrame(const SpeedRequest& m) const {
  return Frame{Tag::kSpeedRequest,
               {ToBytes(m.rsu_id), EncodeTimestamp(m.ts), EncodeTimestamp(m.tr),
                EncodePoint(m.sigma.sigma)}};
}

Frame Codec::ToFrame(const SpeedReport& m) const {
  return Frame{Tag::kSpeedReport,
               {m.pid, EncodePoint(m.y.y), EncodeCiphertext(m.c1),
                EncodeCiphertext(m.c2), EncodeTimestamp(m.ts),
                EncodePoint(m.sigma.sigma)}};
}

Frame Codec::ToFrame(const AggregatedReport& m) const {
  return Frame{Tag::kAggregatedReport,
               {ToBytes(m.rsu_id), EncodeCiphertext(m.c1),
                EncodeCiphertext(m.c2), EncodeTimestamp(m.ts),
                EncodePoint(m.sigma.sigma), EncodeCount(m.n)}};
}

Frame Codec::ToFrame(const TrpmReport& m) const {
  Frame f{Tag::kTrpmReport, {m.pid, EncodePoint(m.y.y)}};
  for (const auto& c : m.c) f.fields.push_back(EncodeCiphertext(c));
  f.fields.push_back(EncodeTimestamp(m.ts));
  f.fields.push_back(EncodePoint(m.sigma.sigma));
  return f;
}

Frame Codec::ToFrame(const TrpmAggregate& m) const {
  Frame f{Tag::kTrpmAggregate, {ToBytes(m.rsu_id)}};
  for (const auto& c : m.c) f.fields.push_back(EncodeCiphertext(c));
  f.fields.push_back(EncodeTimestamp(m.ts));
  f.fields.push_back(EncodePoint(m.sigma.sigma));
  f.fields.push_back(EncodeCount(m.n));
  return f;
}

SpeedRequest Codec::DecodeRequest(BytesView bytes) const {
  Frame f = Expect(bytes, Tag::kSpeedRequest, 4, 4);
  return SpeedRequest{DecodeId(f.fields[0]), DecodeTimestamp(f.fields[1]),
                      DecodeTimestamp(f.fields[2]),
                      {DecodePoint(f.fields[3])}};
}

SpeedReport Codec::DecodeReport(BytesView bytes) const {
  Frame f = Expect(bytes, Tag::kSpeedReport, 6, 6);
  if (f.fields[0].empty()) throw DecodeError("empty pseudonym");
  return SpeedReport{f.fields[0],
                     {DecodePoint(f.fields[1])},
                     DecodeCiphertext(f.fields[2]),
                     DecodeCiphertext(f.fields[3]),
                     DecodeTimestamp(f.fields[4]),
                     {DecodePoint(f.fields[5])}};
}

AggregatedReport Codec::DecodeAggregate(BytesView bytes) const {
  Frame f = Expect(bytes, Tag::kAggregatedReport, 6, 6);
  return AggregatedReport{DecodeId(f.fields[0]),
                          DecodeCiphertext(f.fields[1]),
                          DecodeCiphertext(f.fields[2]),
                          DecodeTimestamp(f.fields[3]),
                          {DecodePoint(f.fields[4])},
                          DecodeCount(f.fields[5])};
}

TrpmReport Codec::DecodeTrpmReport(BytesView bytes) const {
  Frame f = Expect(bytes, Tag::kTrpmReport, 5, SIZE_MAX);
  if (f.fields[0].empty()) throw DecodeError("empty pseudonym");
  TrpmReport m;
  m.pid = f.fields[0];
  m.y.y = DecodePoint(f.fields[1]);
  const size_t last = f.fields.size() - 2;
  for (size_t i = 2; i < last; ++i) {
    m.c.push_back(DecodeCiphertext(f.fields[i]));
  }
  m.ts = DecodeTimestamp(f.fields[last]);
  m.sigma.sigma = DecodePoint(f.fields[last + 1]);
  return m;
}

TrpmAggregate Codec::DecodeTrpmAggregate(BytesView bytes) const {
  Frame f = Expect(bytes, Tag::kTrpmAggregate, 5, SIZE_MAX);
  TrpmAggregate m;
  m.rsu_id = DecodeId(f.fields[0]);
  const size_t last = f.fields.size() - 3;
  for (size_t i = 1; i < last; ++i) {
    m.c.push_back(DecodeCiphertext(f.fields[i]));
  }
  m.ts = DecodeTimestamp(f.fields[last]);
  m.sigma.sigma = DecodePoint(f.fields[last + 1]);
  m.n = DecodeCount(f.fields[last + 2]);
  return m;
}

Bytes Codec::SignedBytes(const SpeedRequest& m) const {
  return SignedPrefix(ToFrame(m));
}
Bytes Codec::SignedBytes(const SpeedReport& m) const {
  return SignedPrefix(ToFrame(m));
}
Bytes Codec::SignedBytes(const AggregatedReport& m) const {
  return SignedPrefix(ToFrame(m));
}
Bytes Codec::SignedBytes(const TrpmReport& m) const {
  return SignedPrefix(ToFrame(m));
}
Bytes Codec::SignedBytes(const TrpmAggregate& m) const {
  return SignedPrefix(ToFrame(m));
}

}  // namespace pptm::wire
