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

#ifndef PPTM_ENTITIES_H_
#define PPTM_ENTITIES_H_

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pptm/bls.h"
#include "pptm/common.h"
#include "pptm/messages.h"
#include "pptm/paillier.h"
#include "pptm/pairing.h"
#include "pptm/pseudonym.h"
#include "pptm/rng.h"
#include "pptm/seqcode.h"
#include "pptm/wire.h"

// The four protocol roles. Every role is a single-threaded value type; the
// only things that cross between roles are the material structs produced by
// the authority and the immutable messages in messages.h.
namespace pptm::entities {

struct SystemConfig {
  int kappa = 160;                     // bits of the pairing group order
  int kappa1 = 512;                    // bits of each Paillier prime
  size_t segments = 10;                // M
  uint64_t max_vehicles = 100;         // Q
  uint64_t max_speed = 200;            // V, in scaled units
  int64_t freshness_window_ms = 5000;
  size_t pseudonyms_per_vehicle = 8;
  uint32_t speed_scale = 1;            // scaled units per km/h

  // Throws InvalidArgumentError.
  void Validate() const;
  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

struct PseudonymCredential {
  Bytes pid;
  sig::SigningKey key;
  sig::VerifyKey verify_key;
  friend bool operator==(const PseudonymCredential&,
                         const PseudonymCredential&) = default;
};

struct VehicleCredentials {
  SystemConfig config;
  pairing::GroupParams group;
  paillier::PublicKey pk;
  std::string rsu_id;
  sig::VerifyKey rsu_key;
  seqcode::SuperIncreasingSeq seq;
  std::vector<PseudonymCredential> pseudonyms;
  friend bool operator==(const VehicleCredentials&,
                         const VehicleCredentials&) = default;
};

struct RsuMaterial {
  SystemConfig config;
  pairing::GroupParams group;
  paillier::PublicKey pk;
  std::string rsu_id;
  sig::SigningKey key;
  sig::VerifyKey verify_key;
  friend bool operator==(const RsuMaterial&, const RsuMaterial&) = default;
};

struct SpRsuRecord {
  std::string rsu_id;
  sig::VerifyKey verify_key;
  seqcode::SuperIncreasingSeq seq;
  friend bool operator==(const SpRsuRecord&, const SpRsuRecord&) = default;
};

struct SpMaterial {
  SystemConfig config;
  pairing::GroupParams group;
  paillier::PublicKey pk;
  paillier::SecretKey sk;
  std::vector<SpRsuRecord> rsus;
  friend bool operator==(const SpMaterial&, const SpMaterial&) = default;
};

struct TraceResult {
  std::string identity;
  size_t pseudonym_index = 0;  // position in issue order for that vehicle
};

class TrustAuthority {
 public:
  TrustAuthority(SystemConfig config, uint64_t seed);

  // Idempotent per rsu_id. Throws CapacityError if M, Q, V do not fit n.
  RsuMaterial RegisterRsu(const std::string& rsu_id);
  // Issues a fresh batch of pseudonyms on every call. The RSU must already
  // be registered.
  VehicleCredentials RegisterVehicle(const std::string& identity,
                                     const std::string& rsu_id);
  SpMaterial ServiceProviderMaterial() const;
  // Throws UnknownPseudonymError for anything this authority did not issue.
  TraceResult Trace(BytesView pid) const;

  const SystemConfig& config() const { return config_; }
  const pairing::GroupParams& group() const { return group_; }
  const paillier::PublicKey& public_key() const { return paillier_.pk; }

 private:
  struct RsuRecord {
    sig::KeyPair keys;
    seqcode::SuperIncreasingSeq seq;
  };

  SystemConfig config_;
  uint64_t seed_;
  pairing::GroupParams group_;
  paillier::Keypair paillier_;
  pseudonym::TracingKey k0_;
  std::map<std::string, RsuRecord> rsus_;
  std::map<std::string, size_t> issued_count_;
  std::map<Bytes, TraceResult> issued_;
};

// ---- vehicle ----

struct TrajectoryEntry {
  size_t segment = 0;    // 0-based segment index
  int64_t dwell_ms = 0;  // time spent on the segment
  uint64_t speed = 0;    // average speed, scaled units
};

// Chronological (oldest first); never transmitted.
struct TrajectoryLog {
  std::vector<TrajectoryEntry> entries;
};

struct SegmentVectors {
  seqcode::SegmentVector flags;   // A_i
  seqcode::SegmentVector speeds;  // S_i
};

// Walks the log from the most recent entry backwards, keeping entries while
// the cumulative dwell time stays within time_range_ms. A segment visited
// more than once keeps its most recent speed.
SegmentVectors SelectRecent(const TrajectoryLog& log, int64_t time_range_ms,
                            size_t segments, uint64_t max_speed);

class Vehicle {
 public:
  Vehicle(std::string identity, VehicleCredentials creds, uint64_t seed);

  // Signature valid and |now - TS| within the freshness window. Costs two
  // pairings.
  bool VerifyRequest(const SpeedRequest& req, int64_t now,
                     OpCounter* ops = nullptr) const;
  bool HasAnswered(const SpeedRequest& req) const;

  // Builds and signs a report with the current pseudonym, then rotates.
  // Throws InvalidArgumentError when the pseudonym pool is exhausted.
  SpeedReport BuildReport(const TrajectoryLog& log, const SpeedRequest& req,
                          OpCounter* ops = nullptr);
  // Baseline: one ciphertext of A_i + (Q + 1) S_i per segment.
  TrpmReport BuildTrpmReport(const TrajectoryLog& log, const SpeedRequest& req,
                             OpCounter* ops = nullptr);

  bool NeedsRegistration() const;
  void Reregister(VehicleCredentials creds);
  const PseudonymCredential& CurrentPseudonym() const;

  const std::string& identity() const { return identity_; }
  const VehicleCredentials& credentials() const { return creds_; }
  size_t reports_sent() const { return reports_sent_; }

 private:
  SegmentVectors Prepare(const TrajectoryLog& log, const SpeedRequest& req);
  void Rotate();

  std::string identity_;
  VehicleCredentials creds_;
  wire::Codec codec_;
  Rng rng_;
  size_t next_pseudonym_ = 0;
  size_t reports_sent_ = 0;
  std::set<std::pair<std::string, int64_t>> answered_;
};

// ---- RSU ----

enum class RejectReason { kMalformed, kStale, kDuplicate, kBadSignature };

const char* RejectReasonName(RejectReason r);

struct Rejection {
  Bytes pid;  // empty when the report did not parse
  RejectReason reason{};
  friend bool operator==(const Rejection&, const Rejection&) = default;
};

template <typename Aggregate>
struct Outcome {
  Aggregate report;
  std::vector<Bytes> accepted;  // PIDs, in input order
  std::vector<Rejection> rejected;
  bool batch_failed = false;    // fell back to individual verification
};

using AggregationOutcome = Outcome<AggregatedReport>;
using TrpmOutcome = Outcome<TrpmAggregate>;

class RoadsideUnit {
 public:
  explicit RoadsideUnit(RsuMaterial material);

  SpeedRequest MakeRequest(int64_t now, int64_t time_range_ms,
                           OpCounter* ops = nullptr) const;

  // Drops stale and duplicate-PID reports, batch-verifies the rest (falling
  // back to one-by-one verification on failure), multiplies the surviving
  // ciphertexts and signs the result. Throws AggregationError if nothing
  // survives.
  AggregationOutcome VerifyAndAggregate(std::span<const SpeedReport> reports,
                                        int64_t now,
                                        OpCounter* ops = nullptr) const;
  // Same, starting from wire bytes; unparseable reports are rejected as
  // malformed.
  AggregationOutcome ReceiveReports(std::span<const Bytes> wire_reports,
                                    int64_t now,
                                    OpCounter* ops = nullptr) const;

  TrpmOutcome VerifyAndAggregateTrpm(std::span<const TrpmReport> reports,
                                     int64_t now,
                                     OpCounter* ops = nullptr) const;
  TrpmOutcome ReceiveTrpmReports(std::span<const Bytes> wire_reports,
                                 int64_t now, OpCounter* ops = nullptr) const;

  const RsuMaterial& material() const { return material_; }
  const wire::Codec& codec() const { return codec_; }

 private:
  RsuMaterial material_;
  wire::Codec codec_;
};

// ---- SP ----

struct SegmentStats {
  std::vector<uint64_t> counts;      // L_i
  std::vector<uint64_t> speed_sums;  // LS_i
  // AS_i = LS_i / L_i rounded half to even, in scaled units; empty when
  // L_i = 0.
  std::vector<std::optional<uint64_t>> averages;
  friend bool operator==(const SegmentStats&, const SegmentStats&) = default;
};

// Division rounding half to even. den must be positive.
uint64_t DivRoundHalfEven(uint64_t num, uint64_t den);
SegmentStats MakeStats(std::vector<uint64_t> counts,
                       std::vector<uint64_t> speed_sums);

struct BulletinEntry {
  size_t segment = 0;
  uint64_t count = 0;
  std::optional<uint64_t> average;
  friend bool operator==(const BulletinEntry&, const BulletinEntry&) = default;
};

struct TrafficBulletin {
  std::string rsu_id;
  int64_t ts = 0;
  uint32_t speed_scale = 1;
  std::vector<BulletinEntry> entries;
  friend bool operator==(const TrafficBulletin&,
                         const TrafficBulletin&) = default;
};

class ServiceProvider {
 public:
  explicit ServiceProvider(SpMaterial material);

  // Verifies the RSU signature (SignatureError), decrypts both ciphertexts
  // and unpacks them (CapacityError when the plaintexts exceed the bounds).
  SegmentStats Read(const AggregatedReport& agg,
                    OpCounter* ops = nullptr) const;
  SegmentStats ReadTrpm(const TrpmAggregate& agg,
                        OpCounter* ops = nullptr) const;

  TrafficBulletin Publish(const SegmentStats& stats, const std::string& rsu_id,
                          int64_t ts) const;

  const SpMaterial& material() const { return material_; }

 private:
  const SpRsuRecord& FindRsu(const std::string& rsu_id) const;

  SpMaterial material_;
  wire::Codec codec_;
};

}  // namespace pptm::entities

#endif  // PPTM_ENTITIES_H_
