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

#include "pptm/entities.h"

#include <algorithm>
#include <type_traits>

#include "pptm/bigint.h"

namespace pptm::entities {

namespace {

Bytes ScalarBytes(const pairing::GroupParams& gp, const mpz_class& x) {
  return ToFixedBytes(x, ByteLength(gp.q));
}

bool Fresh(int64_t now, int64_t ts, int64_t window) {
  int64_t diff = now > ts ? now - ts : ts - now;
  return diff <= window;
}

template <typename Report>
std::vector<paillier::Ciphertext> Ciphertexts(const Report& r) {
  if constexpr (std::is_same_v<Report, SpeedReport>) {
    return {r.c1, r.c2};
  } else {
    return r.c;
  }
}

// Shared RSU pipeline for both schemes: freshness, duplicate PIDs, batch
// verification with individual fallback, ciphertext products, signature.
template <typename Aggregate, typename Report>
Outcome<Aggregate> AggregateReports(const RsuMaterial& mat, const wire::Codec& codec,
                              std::span<const Report> reports, int64_t now,
                              OpCounter* ops) {
  Outcome<Aggregate> out;
  std::vector<const Report*> pending;
  std::set<Bytes> seen;
  for (const Report& r : reports) {
    if (!Fresh(now, r.ts, mat.config.freshness_window_ms)) {
      out.rejected.push_back({r.pid, RejectReason::kStale});
    } else if (!seen.insert(r.pid).second) {
      out.rejected.push_back({r.pid, RejectReason::kDuplicate});
    } else {
      pending.push_back(&r);
    }
  }

  std::vector<Bytes> messages;
  messages.reserve(pending.size());
  for (const Report* r : pending) messages.push_back(codec.SignedBytes(*r));

  std::vector<const Report*> valid;
  if (!pending.empty()) {
    std::vector<sig::BatchItem> items;
    for (size_t i = 0; i < pending.size(); ++i) {
      items.push_back({&pending[i]->y, messages[i], &pending[i]->sigma});
    }
    if (sig::BatchVerify(mat.group, items, ops)) {
      valid = pending;
    } else {
      out.batch_failed = true;
      for (size_t i = 0; i < pending.size(); ++i) {
        if (sig::Verify(mat.group, pending[i]->y, messages[i],
                        pending[i]->sigma, ops)) {
          valid.push_back(pending[i]);
        } else {
          out.rejected.push_back({pending[i]->pid, RejectReason::kBadSignature});
        }
      }
    }
  }
  if (valid.empty()) {
    throw AggregationError("no valid reports to aggregate");
  }

  std::vector<paillier::Ciphertext> product = Ciphertexts(*valid.front());
  out.accepted.push_back(valid.front()->pid);
  for (size_t j = 1; j < valid.size(); ++j) {
    std::vector<paillier::Ciphertext> cs = Ciphertexts(*valid[j]);
    if (cs.size() != product.size()) {
      throw AggregationError("reports disagree on ciphertext count");
    }
    for (size_t i = 0; i < cs.size(); ++i) {
      product[i] = paillier::Add(mat.pk, product[i], cs[i], ops);
    }
    out.accepted.push_back(valid[j]->pid);
  }

  Aggregate& agg = out.report;
  agg.rsu_id = mat.rsu_id;
  if constexpr (std::is_same_v<Aggregate, AggregatedReport>) {
    agg.c1 = product[0];
    agg.c2 = product[1];
  } else {
    agg.c = std::move(product);
  }
  // Reports carry the request timestamp they answer; the aggregate keeps it.
  agg.ts = valid.front()->ts;
  agg.n = static_cast<uint32_t>(valid.size());
  agg.sigma = sig::Sign(mat.group, mat.key, codec.SignedBytes(agg), ops);
  return out;
}

}  // namespace

void SystemConfig::Validate() const {
  if (!pairing::IsSupportedKappa(kappa)) {
    throw InvalidArgumentError("unsupported kappa");
  }
  if (kappa1 < 16) throw InvalidArgumentError("kappa1 must be at least 16");
  if (segments < 1) throw InvalidArgumentError("M must be at least 1");
  if (max_vehicles < 1) throw InvalidArgumentError("Q must be at least 1");
  if (max_speed < 1) throw InvalidArgumentError("V must be at least 1");
  if (freshness_window_ms <= 0) {
    throw InvalidArgumentError("freshness window must be positive");
  }
  if (pseudonyms_per_vehicle < 1) {
    throw InvalidArgumentError("need at least one pseudonym per vehicle");
  }
  if (speed_scale < 1) throw InvalidArgumentError("speed scale must be >= 1");
}

// ---- TA ----

TrustAuthority::TrustAuthority(SystemConfig config, uint64_t seed)
    : config_(std::move(config)), seed_(seed) {
  config_.Validate();
  Rng master(seed);
  group_ = pairing::Setup(config_.kappa, Rng::DeriveSeed(seed, "group"));
  Rng prng = master.Derive("paillier");
  paillier_ = paillier::GenerateKeypair(config_.kappa1, prng);
  Rng krng = master.Derive("k0");
  k0_ = pseudonym::TracingKey::Generate(krng);
}

RsuMaterial TrustAuthority::RegisterRsu(const std::string& rsu_id) {
  if (rsu_id.empty()) throw InvalidArgumentError("empty RSU identity");
  auto it = rsus_.find(rsu_id);
  if (it == rsus_.end()) {
    Rng rng = Rng(seed_).Derive("rsu/" + rsu_id);
    RsuRecord rec;
    rec.keys = sig::KeyGen(group_, rng);
    rec.seq = seqcode::Generate(config_.segments, config_.max_vehicles,
                                config_.max_speed, paillier_.pk.n, rng);
    it = rsus_.emplace(rsu_id, std::move(rec)).first;
  }
  return RsuMaterial{config_,          group_,
                     paillier_.pk,     rsu_id,
                     it->second.keys.sk, it->second.keys.vk};
}

VehicleCredentials TrustAuthority::RegisterVehicle(const std::string& identity,
                                                   const std::string& rsu_id) {
  auto rsu = rsus_.find(rsu_id);
  if (rsu == rsus_.end()) throw InvalidArgumentError("unknown RSU " + rsu_id);
  if (identity.empty()) throw InvalidArgumentError("empty vehicle identity");

  size_t batch = issued_count_[identity]++;
  Rng rng = Rng(seed_).Derive("vehicle/" + identity + "/" +
                              std::to_string(batch));
  VehicleCredentials creds{config_,           group_, paillier_.pk, rsu_id,
                           rsu->second.keys.vk, rsu->second.seq, {}};
  const size_t n = config_.pseudonyms_per_vehicle;
  for (size_t j = 0; j < n; ++j) {
    sig::KeyPair kp = sig::KeyGen(group_, rng);
    Bytes pid = pseudonym::Seal(k0_, identity, ScalarBytes(group_, kp.sk.x));
    issued_[pid] = TraceResult{identity, batch * n + j};
    creds.pseudonyms.push_back({std::move(pid), kp.sk, kp.vk});
  }
  return creds;
}

SpMaterial TrustAuthority::ServiceProviderMaterial() const {
  SpMaterial m{config_, group_, paillier_.pk, paillier_.sk, {}};
  for (const auto& [id, rec] : rsus_) {
    m.rsus.push_back({id, rec.keys.vk, rec.seq});
  }
  return m;
}

TraceResult TrustAuthority::Trace(BytesView pid) const {
  std::optional<pseudonym::Opened> opened = pseudonym::Open(k0_, pid);
  if (!opened) throw UnknownPseudonymError("pseudonym does not authenticate");
  auto it = issued_.find(Bytes(pid.begin(), pid.end()));
  if (it == issued_.end() || it->second.identity != opened->identity) {
    throw UnknownPseudonymError("pseudonym was not issued by this authority");
  }
  return it->second;
}

// ---- vehicle ----

SegmentVectors SelectRecent(const TrajectoryLog& log, int64_t time_range_ms,
                            size_t segments, uint64_t max_speed) {
  for (const TrajectoryEntry& e : log.entries) {
    if (e.segment >= segments) {
      throw InvalidArgumentError("trajectory segment out of range");
    }
    if (e.dwell_ms < 0) throw InvalidArgumentError("negative dwell time");
    if (e.speed > max_speed) throw InvalidArgumentError("speed exceeds V");
  }
  SegmentVectors v{seqcode::SegmentVector(segments, 0),
                   seqcode::SegmentVector(segments, 0)};
  int64_t total = 0;
  for (auto it = log.entries.rbegin(); it != log.entries.rend(); ++it) {
    if (total + it->dwell_ms > time_range_ms) break;
    total += it->dwell_ms;
    if (v.flags[it->segment] == 0) {
      v.flags[it->segment] = 1;
      v.speeds[it->segment] = it->speed;
    }
  }
  return v;
}

Vehicle::Vehicle(std::string identity, VehicleCredentials creds, uint64_t seed)
    : identity_(std::move(identity)),
      creds_(std::move(creds)),
      codec_(creds_.group, creds_.pk),
      rng_(seed) {}

bool Vehicle::VerifyRequest(const SpeedRequest& req, int64_t now,
                            OpCounter* ops) const {
  if (req.rsu_id != creds_.rsu_id) return false;
  if (!Fresh(now, req.ts, creds_.config.freshness_window_ms)) return false;
  return sig::Verify(creds_.group, creds_.rsu_key, codec_.SignedBytes(req),
                     req.sigma, ops);
}

bool Vehicle::HasAnswered(const SpeedRequest& req) const {
  return answered_.contains({req.rsu_id, req.ts});
}

bool Vehicle::NeedsRegistration() const {
  return next_pseudonym_ >= creds_.pseudonyms.size();
}

void Vehicle::Reregister(VehicleCredentials creds) {
  creds_ = std::move(creds);
  codec_ = wire::Codec(creds_.group, creds_.pk);
  next_pseudonym_ = 0;
}

const PseudonymCredential& Vehicle::CurrentPseudonym() const {
  if (NeedsRegistration()) {
    throw InvalidArgumentError("pseudonym pool exhausted; re-register");
  }
  return creds_.pseudonyms[next_pseudonym_];
}

void Vehicle::Rotate() {
  ++next_pseudonym_;
  ++reports_sent_;
}

SegmentVectors Vehicle::Prepare(const TrajectoryLog& log,
                                const SpeedRequest& req) {
  CurrentPseudonym();  // throws when exhausted
  return SelectRecent(log, req.tr, creds_.config.segments,
                      creds_.config.max_speed);
}

SpeedReport Vehicle::BuildReport(const TrajectoryLog& log,
                                 const SpeedRequest& req, OpCounter* ops) {
  SegmentVectors v = Prepare(log, req);
  const PseudonymCredential& cred = CurrentPseudonym();
  SpeedReport r;
  r.pid = cred.pid;
  r.y = cred.verify_key;
  r.c1 = paillier::Encrypt(
      creds_.pk, seqcode::Encode(creds_.seq, v.flags, seqcode::Role::kFlags),
      rng_, ops);
  r.c2 = paillier::Encrypt(
      creds_.pk, seqcode::Encode(creds_.seq, v.speeds, seqcode::Role::kSpeeds),
      rng_, ops);
  r.ts = req.ts;
  r.sigma = sig::Sign(creds_.group, cred.key, codec_.SignedBytes(r), ops);
  answered_.insert({req.rsu_id, req.ts});
  Rotate();
  return r;
}

TrpmReport Vehicle::BuildTrpmReport(const TrajectoryLog& log,
                                    const SpeedRequest& req, OpCounter* ops) {
  SegmentVectors v = Prepare(log, req);
  const PseudonymCredential& cred = CurrentPseudonym();
  const mpz_class radix = FromU64(creds_.config.max_vehicles) + 1;
  TrpmReport r;
  r.pid = cred.pid;
  r.y = cred.verify_key;
  for (size_t i = 0; i < v.flags.size(); ++i) {
    mpz_class m = FromU64(v.flags[i]) + radix * FromU64(v.speeds[i]);
    r.c.push_back(paillier::Encrypt(creds_.pk, m, rng_, ops));
  }
  r.ts = req.ts;
  r.sigma = sig::Sign(creds_.group, cred.key, codec_.SignedBytes(r), ops);
  answered_.insert({req.rsu_id, req.ts});
  Rotate();
  return r;
}

// ---- RSU ----

const char* RejectReasonName(RejectReason r) {
  switch (r) {
    case RejectReason::kMalformed:
      return "malformed";
    case RejectReason::kStale:
      return "stale";
    case RejectReason::kDuplicate:
      return "duplicate";
    case RejectReason::kBadSignature:
      return "bad_signature";
  }
  return "unknown";
}

RoadsideUnit::RoadsideUnit(RsuMaterial material)
    : material_(std::move(material)),
      codec_(material_.group, material_.pk) {}

SpeedRequest RoadsideUnit::MakeRequest(int64_t now, int64_t time_range_ms,
                                       OpCounter* ops) const {
  SpeedRequest req{material_.rsu_id, now, time_range_ms, {}};
  req.sigma =
      sig::Sign(material_.group, material_.key, codec_.SignedBytes(req), ops);
  return req;
}

AggregationOutcome RoadsideUnit::VerifyAndAggregate(
    std::span<const SpeedReport> reports, int64_t now, OpCounter* ops) const {
  return AggregateReports<AggregatedReport>(material_, codec_, reports, now, ops);
}

TrpmOutcome RoadsideUnit::VerifyAndAggregateTrpm(
    std::span<const TrpmReport> reports, int64_t now, OpCounter* ops) const {
  std::vector<TrpmReport> shaped;
  std::vector<Rejection> malformed;
  for (const TrpmReport& r : reports) {
    if (r.c.size() == material_.config.segments) {
      shaped.push_back(r);
    } else {
      malformed.push_back({r.pid, RejectReason::kMalformed});
    }
  }
  if (shaped.empty()) throw AggregationError("no valid reports to aggregate");
  TrpmOutcome out = AggregateReports<TrpmAggregate, TrpmReport>(
      material_, codec_, shaped, now, ops);
  out.rejected.insert(out.rejected.begin(), malformed.begin(), malformed.end());
  return out;
}

namespace {

template <typename Report, typename DecodeFn, typename AggregateFn>
auto Receive(std::span<const Bytes> wire_reports, DecodeFn decode,
             AggregateFn aggregate) {
  std::vector<Report> decoded;
  std::vector<Rejection> malformed;
  for (const Bytes& bytes : wire_reports) {
    try {
      decoded.push_back(decode(bytes));
    } catch (const DecodeError&) {
      malformed.push_back({Bytes{}, RejectReason::kMalformed});
    }
  }
  if (decoded.empty()) throw AggregationError("no parseable reports");
  auto out = aggregate(std::span<const Report>(decoded));
  out.rejected.insert(out.rejected.begin(), malformed.begin(), malformed.end());
  return out;
}

}  // namespace

AggregationOutcome RoadsideUnit::ReceiveReports(
    std::span<const Bytes> wire_reports, int64_t now, OpCounter* ops) const {
  return Receive<SpeedReport>(
      wire_reports, [&](const Bytes& b) { return codec_.DecodeReport(b); },
      [&](std::span<const SpeedReport> rs) {
        return VerifyAndAggregate(rs, now, ops);
      });
}

TrpmOutcome RoadsideUnit::ReceiveTrpmReports(
    std::span<const Bytes> wire_reports, int64_t now, OpCounter* ops) const {
  return Receive<TrpmReport>(
      wire_reports, [&](const Bytes& b) { return codec_.DecodeTrpmReport(b); },
      [&](std::span<const TrpmReport> rs) {
        return VerifyAndAggregateTrpm(rs, now, ops);
      });
}

// ---- SP ----

uint64_t DivRoundHalfEven(uint64_t num, uint64_t den) {
  if (den == 0) throw InvalidArgumentError("division by zero");
  uint64_t q = num / den;
  uint64_t r = num % den;
  uint64_t rest = den - r;
  if (r > rest || (r == rest && (q & 1) != 0)) ++q;
  return q;
}

SegmentStats MakeStats(std::vector<uint64_t> counts,
                       std::vector<uint64_t> speed_sums) {
  if (counts.size() != speed_sums.size()) {
    throw InvalidArgumentError("count and sum vectors differ in length");
  }
  SegmentStats s;
  for (size_t i = 0; i < counts.size(); ++i) {
    s.averages.push_back(counts[i] == 0 ? std::nullopt
                                        : std::optional<uint64_t>(DivRoundHalfEven(
                                              speed_sums[i], counts[i])));
  }
  s.counts = std::move(counts);
  s.speed_sums = std::move(speed_sums);
  return s;
}

ServiceProvider::ServiceProvider(SpMaterial material)
    : material_(std::move(material)),
      codec_(material_.group, material_.pk) {}

const SpRsuRecord& ServiceProvider::FindRsu(const std::string& rsu_id) const {
  for (const SpRsuRecord& r : material_.rsus) {
    if (r.rsu_id == rsu_id) return r;
  }
  throw SignatureError("aggregate from unknown RSU " + rsu_id);
}

SegmentStats ServiceProvider::Read(const AggregatedReport& agg,
                                   OpCounter* ops) const {
  const SpRsuRecord& rsu = FindRsu(agg.rsu_id);
  if (!sig::Verify(material_.group, rsu.verify_key, codec_.SignedBytes(agg),
                   agg.sigma, ops)) {
    throw SignatureError("aggregate signature does not verify");
  }
  mpz_class m1 = paillier::Decrypt(material_.sk, material_.pk, agg.c1, ops);
  mpz_class m2 = paillier::Decrypt(material_.sk, material_.pk, agg.c2, ops);
  seqcode::SegmentVector counts =
      seqcode::Decode(rsu.seq, m1, seqcode::Role::kFlags);
  seqcode::SegmentVector sums =
      seqcode::Decode(rsu.seq, m2, seqcode::Role::kSpeeds);
  for (size_t i = 0; i < counts.size(); ++i) {
    if (sums[i] > counts[i] * rsu.seq.max_value) {
      throw CapacityError("speed sum exceeds count * V");
    }
  }
  return MakeStats(std::move(counts), std::move(sums));
}

SegmentStats ServiceProvider::ReadTrpm(const TrpmAggregate& agg,
                                       OpCounter* ops) const {
  const SpRsuRecord& rsu = FindRsu(agg.rsu_id);
  if (agg.c.size() != rsu.seq.segments()) {
    throw DecodeError("aggregate has wrong segment count");
  }
  if (!sig::Verify(material_.group, rsu.verify_key, codec_.SignedBytes(agg),
                   agg.sigma, ops)) {
    throw SignatureError("aggregate signature does not verify");
  }
  const uint64_t q = rsu.seq.max_vehicles;
  const mpz_class radix = FromU64(q) + 1;
  std::vector<uint64_t> counts, sums;
  for (const paillier::Ciphertext& c : agg.c) {
    mpz_class m = paillier::Decrypt(material_.sk, material_.pk, c, ops);
    mpz_class count = m % radix;
    mpz_class sum = m / radix;
    if (BitLength(sum) > 64 || ToU64(sum) > q * rsu.seq.max_value) {
      throw CapacityError("segment sum exceeds Q * V");
    }
    counts.push_back(ToU64(count));
    sums.push_back(ToU64(sum));
    if (sums.back() > counts.back() * rsu.seq.max_value) {
      throw CapacityError("speed sum exceeds count * V");
    }
  }
  return MakeStats(std::move(counts), std::move(sums));
}

TrafficBulletin ServiceProvider::Publish(const SegmentStats& stats,
                                         const std::string& rsu_id,
                                         int64_t ts) const {
  TrafficBulletin b{rsu_id, ts, material_.config.speed_scale, {}};
  for (size_t i = 0; i < stats.counts.size(); ++i) {
    b.entries.push_back({i, stats.counts[i], stats.averages[i]});
  }
  return b;
}

}  // namespace pptm::entities
