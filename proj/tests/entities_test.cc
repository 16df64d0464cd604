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

#include <gtest/gtest.h>

#include <set>

#include "generators.h"
#include "pptm/bls.h"
#include "pptm/serialize.h"

namespace pptm::entities {
namespace {

// Secret-key members must not exist on the RSU's material at all.
template <typename T>
concept HoldsPaillierSecret = requires(T t) { t.sk; };
static_assert(!HoldsPaillierSecret<RsuMaterial>);
static_assert(!HoldsPaillierSecret<VehicleCredentials>);
static_assert(HoldsPaillierSecret<SpMaterial>);

TEST(SelectRecent, WorkedExample) {
  // Six segments; dwell 5, 3.5 and 2 s on segments 1, 5 and 6 (1-based),
  // time range 8 s.
  TrajectoryLog log{{{0, 5000, 50}, {4, 3500, 75}, {5, 2000, 60}}};
  SegmentVectors v = SelectRecent(log, 8000, 6, 200);
  EXPECT_EQ(v.flags, (seqcode::SegmentVector{0, 0, 0, 0, 1, 1}));
  EXPECT_EQ(v.speeds, (seqcode::SegmentVector{0, 0, 0, 0, 75, 60}));
}

TEST(SelectRecent, EdgeCases) {
  SegmentVectors empty = SelectRecent({}, 8000, 3, 100);
  EXPECT_EQ(empty.flags, (seqcode::SegmentVector{0, 0, 0}));
  TrajectoryLog exact{{{0, 3000, 10}, {1, 5000, 20}}};
  EXPECT_EQ(SelectRecent(exact, 8000, 2, 100).flags,
            (seqcode::SegmentVector{1, 1}));
  EXPECT_EQ(SelectRecent(exact, 7999, 2, 100).flags,
            (seqcode::SegmentVector{0, 1}));
  // Revisited segment keeps the most recent speed.
  TrajectoryLog again{{{0, 1000, 10}, {1, 1000, 20}, {0, 1000, 30}}};
  EXPECT_EQ(SelectRecent(again, 8000, 2, 100).speeds,
            (seqcode::SegmentVector{30, 20}));
  EXPECT_THROW(SelectRecent({{{3, 1, 1}}}, 10, 2, 100), InvalidArgumentError);
  EXPECT_THROW(SelectRecent({{{0, 1, 101}}}, 10, 2, 100),
               InvalidArgumentError);
  EXPECT_THROW(SelectRecent({{{0, -1, 1}}}, 10, 2, 100), InvalidArgumentError);
}

TEST(Rounding, HalfToEven) {
  EXPECT_EQ(DivRoundHalfEven(180, 3), 60u);
  EXPECT_EQ(DivRoundHalfEven(5, 2), 2u);
  EXPECT_EQ(DivRoundHalfEven(7, 2), 4u);
  EXPECT_EQ(DivRoundHalfEven(165, 2), 82u);
  EXPECT_EQ(DivRoundHalfEven(1, 3), 0u);
  EXPECT_EQ(DivRoundHalfEven(2, 3), 1u);
  EXPECT_EQ(DivRoundHalfEven(0, 9), 0u);
}

TEST(Config, Validation) {
  SystemConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.segments = 0;
  EXPECT_THROW(c.Validate(), InvalidArgumentError);
  c = {};
  c.freshness_window_ms = 0;
  EXPECT_THROW(c.Validate(), InvalidArgumentError);
  c = {};
  c.max_speed = 0;
  EXPECT_THROW(c.Validate(), InvalidArgumentError);
}

class Deployment : public ::testing::Test {
 protected:
  Deployment()
      : config_(testgen::SmallConfig(4, 10, 150)),
        ta_(config_, 2024),
        rsu_(ta_.RegisterRsu("rsu-1")),
        sp_(ta_.ServiceProviderMaterial()) {}

  Vehicle MakeVehicle(const std::string& id) {
    return Vehicle(id, ta_.RegisterVehicle(id, "rsu-1"),
                   Rng::DeriveSeed(9, id));
  }

  mpz_class DecryptRaw(const paillier::Ciphertext& c) const {
    SpMaterial m = ta_.ServiceProviderMaterial();
    return paillier::Decrypt(m.sk, m.pk, c);
  }

  SystemConfig config_;
  TrustAuthority ta_;
  RoadsideUnit rsu_;
  ServiceProvider sp_;
};

TEST_F(Deployment, RequestVerification) {
  Vehicle v = MakeVehicle("car-1");
  SpeedRequest req = rsu_.MakeRequest(50000, 10000);
  EXPECT_EQ(req.ts, 50000);
  EXPECT_TRUE(v.VerifyRequest(req, 50010));
  EXPECT_TRUE(v.VerifyRequest(req, 55000));   // edge of the window
  EXPECT_FALSE(v.VerifyRequest(req, 55001));  // stale replay
  EXPECT_FALSE(v.VerifyRequest(req, 44999));  // from the future

  // Another RSU claiming to be rsu-1.
  RoadsideUnit rogue(ta_.RegisterRsu("rsu-2"));
  SpeedRequest forged = rogue.MakeRequest(50000, 10000);
  forged.rsu_id = "rsu-1";
  EXPECT_FALSE(v.VerifyRequest(forged, 50010));
  SpeedRequest foreign = rogue.MakeRequest(50000, 10000);
  EXPECT_FALSE(v.VerifyRequest(foreign, 50010));

  SpeedRequest altered = req;
  altered.tr += 1;
  EXPECT_FALSE(v.VerifyRequest(altered, 50010));

  OpCounter ops;
  v.VerifyRequest(req, 50010, &ops);
  EXPECT_EQ(ops.pairing, 2u);
}

TEST_F(Deployment, ReportCostsAndRotation) {
  Vehicle v = MakeVehicle("car-1");
  SpeedRequest req = rsu_.MakeRequest(50000, 10000);
  TrajectoryLog log{{{1, 4000, 80}}};
  OpCounter ops;
  SpeedReport a = v.BuildReport(log, req, &ops);
  EXPECT_EQ(ops.exp_n2, 2u);
  EXPECT_EQ(ops.mul_g, 1u);
  EXPECT_EQ(ops.pairing, 0u);
  EXPECT_TRUE(v.HasAnswered(req));
  EXPECT_EQ(a.ts, req.ts);

  SpeedRequest next = rsu_.MakeRequest(80000, 10000);
  SpeedReport b = v.BuildReport(log, next);
  EXPECT_NE(a.pid, b.pid);
  EXPECT_NE(a.y, b.y);

  OpCounter trpm;
  v.BuildTrpmReport(log, rsu_.MakeRequest(90000, 10000), &trpm);
  EXPECT_EQ(trpm.exp_n2, config_.segments);
  EXPECT_EQ(trpm.mul_g, 1u);
}

TEST_F(Deployment, PseudonymPoolAndReregistration) {
  Vehicle v = MakeVehicle("car-1");
  TrajectoryLog log;
  for (size_t k = 0; k < config_.pseudonyms_per_vehicle; ++k) {
    v.BuildReport(log, rsu_.MakeRequest(1000 * (k + 1), 100));
  }
  EXPECT_TRUE(v.NeedsRegistration());
  EXPECT_THROW(v.BuildReport(log, rsu_.MakeRequest(99000, 100)),
               InvalidArgumentError);
  v.Reregister(ta_.RegisterVehicle("car-1", "rsu-1"));
  EXPECT_FALSE(v.NeedsRegistration());
  SpeedReport r = v.BuildReport(log, rsu_.MakeRequest(99000, 100));
  TraceResult t = ta_.Trace(r.pid);
  EXPECT_EQ(t.identity, "car-1");
  EXPECT_EQ(t.pseudonym_index, config_.pseudonyms_per_vehicle);
}

TEST_F(Deployment, Tracing) {
  VehicleCredentials a = ta_.RegisterVehicle("alice", "rsu-1");
  VehicleCredentials b = ta_.RegisterVehicle("bob", "rsu-1");
  std::set<Bytes> pids;
  for (size_t j = 0; j < a.pseudonyms.size(); ++j) {
    TraceResult t = ta_.Trace(a.pseudonyms[j].pid);
    EXPECT_EQ(t.identity, "alice");
    EXPECT_EQ(t.pseudonym_index, j);
    pids.insert(a.pseudonyms[j].pid);
    // Y = xP for every pseudonym key.
    EXPECT_EQ(a.pseudonyms[j].verify_key,
              sig::KeyFromScalar(a.group, a.pseudonyms[j].key.x).vk);
  }
  for (const auto& p : b.pseudonyms) {
    EXPECT_EQ(ta_.Trace(p.pid).identity, "bob");
    EXPECT_FALSE(pids.contains(p.pid));
  }
  Bytes tampered = a.pseudonyms[0].pid;
  tampered[tampered.size() / 2] ^= 0x01;
  EXPECT_THROW(ta_.Trace(tampered), UnknownPseudonymError);
  EXPECT_THROW(ta_.Trace(ToBytes("not a pid")), UnknownPseudonymError);
  // The identity never appears in the clear inside a PID.
  std::string pid_text(a.pseudonyms[0].pid.begin(), a.pseudonyms[0].pid.end());
  EXPECT_EQ(pid_text.find("alice"), std::string::npos);
  EXPECT_THROW(ta_.RegisterVehicle("", "rsu-1"), InvalidArgumentError);
  EXPECT_THROW(ta_.RegisterVehicle("carol", "rsu-9"), InvalidArgumentError);
}

TEST_F(Deployment, MaterialSeparation) {
  SpMaterial sp = ta_.ServiceProviderMaterial();
  ASSERT_EQ(sp.rsus.size(), 1u);
  EXPECT_EQ(sp.rsus[0].verify_key, rsu_.material().verify_key);
  // Serialized forms: SP has (lambda, mu), the RSU and vehicles do not.
  std::string rsu_json = serialize::ToJson(rsu_.material());
  std::string sp_json = serialize::ToJson(sp);
  std::string veh_json =
      serialize::ToJson(ta_.RegisterVehicle("dave", "rsu-1"));
  EXPECT_EQ(rsu_json.find("\"lambda\""), std::string::npos);
  EXPECT_EQ(rsu_json.find("\"mu\""), std::string::npos);
  EXPECT_EQ(veh_json.find("\"lambda\""), std::string::npos);
  EXPECT_NE(sp_json.find("\"lambda\""), std::string::npos);
  EXPECT_NE(sp_json.find("\"mu\""), std::string::npos);
  EXPECT_EQ(sp_json.find("\"signing_key\""), std::string::npos);
  EXPECT_EQ(sp_json.find("\"pseudonyms\""), std::string::npos);
  // The RSU's sequence is not shipped to the RSU.
  EXPECT_EQ(rsu_json.find("\"seq\""), std::string::npos);
}

TEST_F(Deployment, MaterialsDeterministic) {
  TrustAuthority again(config_, 2024);
  EXPECT_EQ(again.RegisterRsu("rsu-1"), rsu_.material());
  EXPECT_EQ(again.ServiceProviderMaterial(), ta_.ServiceProviderMaterial());
  TrustAuthority fresh(config_, 2024);
  fresh.RegisterRsu("rsu-1");
  TrustAuthority fresh2(config_, 2024);
  fresh2.RegisterRsu("rsu-1");
  EXPECT_EQ(fresh.RegisterVehicle("eve", "rsu-1"),
            fresh2.RegisterVehicle("eve", "rsu-1"));
  TrustAuthority other(config_, 2025);
  EXPECT_NE(other.RegisterRsu("rsu-1").key, rsu_.material().key);
}

// Four vehicles over four segments: decrypted aggregates equal the
// a-weighted sums of flags and speeds.
TEST_F(Deployment, FourReportAggregate) {
  SpeedRequest req = rsu_.MakeRequest(50000, 10000);
  std::vector<TrajectoryLog> logs = {
      {{{0, 3000, 60}, {1, 3000, 70}}},
      {{{1, 2000, 90}}},
      {{{2, 4000, 40}, {3, 1000, 100}}},
      {{{0, 1000, 55}, {3, 2000, 65}}},
  };
  std::vector<SpeedReport> reports;
  seqcode::SegmentVector flags(4, 0), speeds(4, 0);
  const auto& seq = sp_.material().rsus[0].seq;
  mpz_class packed_flags = 0, packed_speeds = 0;
  for (size_t j = 0; j < logs.size(); ++j) {
    Vehicle v = MakeVehicle("car-" + std::to_string(j));
    reports.push_back(v.BuildReport(logs[j], req));
    SegmentVectors sv = SelectRecent(logs[j], req.tr, 4, 150);
    packed_flags += seqcode::Encode(seq, sv.flags, seqcode::Role::kFlags);
    packed_speeds += seqcode::Encode(seq, sv.speeds, seqcode::Role::kSpeeds);
    for (size_t i = 0; i < 4; ++i) {
      flags[i] += sv.flags[i];
      speeds[i] += sv.speeds[i];
    }
  }
  OpCounter ops;
  AggregationOutcome out = rsu_.VerifyAndAggregate(reports, 50100, &ops);
  EXPECT_EQ(out.report.n, 4u);
  EXPECT_FALSE(out.batch_failed);
  EXPECT_EQ(ops.pairing, 5u);
  EXPECT_EQ(ops.mul_g, 1u);
  EXPECT_EQ(ops.exp_n2, 0u);

  EXPECT_EQ(DecryptRaw(out.report.c1), packed_flags);
  EXPECT_EQ(DecryptRaw(out.report.c2), packed_speeds);

  OpCounter sp_ops;
  SegmentStats stats = sp_.Read(out.report, &sp_ops);
  EXPECT_EQ(stats.counts, flags);
  EXPECT_EQ(stats.speed_sums, speeds);
  EXPECT_EQ(sp_ops.exp_n2, 2u);
  EXPECT_EQ(sp_ops.pairing, 2u);
}

TEST_F(Deployment, TamperedReportDropped) {
  SpeedRequest req = rsu_.MakeRequest(50000, 10000);
  std::vector<SpeedReport> reports;
  for (int j = 0; j < 4; ++j) {
    Vehicle v = MakeVehicle("car-" + std::to_string(j));
    reports.push_back(v.BuildReport({{{1, 1000, 60u + 10u * j}}}, req));
  }
  // Re-randomize C1 of report 2: still a valid ciphertext, but unsigned.
  reports[2].c1 = paillier::Add(rsu_.codec().pk(), reports[2].c1,
                                paillier::EncryptWithNonce(
                                    rsu_.codec().pk(), 0, 12345));
  AggregationOutcome out = rsu_.VerifyAndAggregate(reports, 50100);
  EXPECT_TRUE(out.batch_failed);
  EXPECT_EQ(out.report.n, 3u);
  ASSERT_EQ(out.rejected.size(), 1u);
  EXPECT_EQ(out.rejected[0].pid, reports[2].pid);
  EXPECT_EQ(out.rejected[0].reason, RejectReason::kBadSignature);
  SegmentStats stats = sp_.Read(out.report);
  EXPECT_EQ(stats.counts[1], 3u);
  EXPECT_EQ(stats.speed_sums[1], 60u + 70u + 90u);
}

TEST_F(Deployment, SingleReportAggregateIsTheReport) {
  SpeedRequest req = rsu_.MakeRequest(50000, 10000);
  Vehicle v = MakeVehicle("solo");
  SpeedReport r = v.BuildReport({{{2, 1000, 77}}}, req);
  AggregationOutcome out = rsu_.VerifyAndAggregate(std::span(&r, 1), 50000);
  EXPECT_EQ(out.report.c1, r.c1);
  EXPECT_EQ(out.report.c2, r.c2);
  SegmentStats s = sp_.Read(out.report);
  EXPECT_EQ(s.counts, (std::vector<uint64_t>{0, 0, 1, 0}));
  EXPECT_EQ(s.averages[2], std::optional<uint64_t>(77));
  EXPECT_FALSE(s.averages[0].has_value());
}

TEST_F(Deployment, EmptyLogContributesZeros) {
  SpeedRequest req = rsu_.MakeRequest(50000, 10000);
  Vehicle v = MakeVehicle("idle");
  SpeedReport r = v.BuildReport({}, req);
  SegmentStats s =
      sp_.Read(rsu_.VerifyAndAggregate(std::span(&r, 1), 50000).report);
  EXPECT_EQ(s.counts, (std::vector<uint64_t>(4, 0)));
  EXPECT_EQ(s.speed_sums, (std::vector<uint64_t>(4, 0)));
}

TEST_F(Deployment, StaleDuplicateAndEmpty) {
  SpeedRequest req = rsu_.MakeRequest(50000, 10000);
  Vehicle v = MakeVehicle("car");
  Vehicle w = MakeVehicle("van");
  SpeedReport r = v.BuildReport({{{0, 10, 30}}}, req);
  SpeedReport s = w.BuildReport({{{0, 10, 40}}}, req);
  std::vector<SpeedReport> dup{r, s, r};
  AggregationOutcome out = rsu_.VerifyAndAggregate(dup, 50000);
  EXPECT_EQ(out.report.n, 2u);
  ASSERT_EQ(out.rejected.size(), 1u);
  EXPECT_EQ(out.rejected[0].reason, RejectReason::kDuplicate);

  std::vector<SpeedReport> one{r};
  EXPECT_THROW(rsu_.VerifyAndAggregate(one, 60000), AggregationError);
  EXPECT_THROW(rsu_.VerifyAndAggregate({}, 50000), AggregationError);
}

TEST_F(Deployment, WireIntakeRejectsGarbage) {
  SpeedRequest req = rsu_.MakeRequest(50000, 10000);
  Vehicle v = MakeVehicle("car");
  Bytes good = rsu_.codec().Encode(v.BuildReport({{{0, 10, 30}}}, req));
  std::vector<Bytes> frames{ToBytes("junk"), good};
  AggregationOutcome out = rsu_.ReceiveReports(frames, 50000);
  EXPECT_EQ(out.report.n, 1u);
  ASSERT_EQ(out.rejected.size(), 1u);
  EXPECT_EQ(out.rejected[0].reason, RejectReason::kMalformed);
  EXPECT_STREQ(RejectReasonName(RejectReason::kMalformed), "malformed");
}

TEST_F(Deployment, SpChecksAggregateSignature) {
  SpeedRequest req = rsu_.MakeRequest(50000, 10000);
  Vehicle v = MakeVehicle("car");
  SpeedReport r = v.BuildReport({{{0, 10, 30}}}, req);
  AggregatedReport agg =
      rsu_.VerifyAndAggregate(std::span(&r, 1), 50000).report;
  AggregatedReport bad = agg;
  bad.ts += 1;
  EXPECT_THROW(sp_.Read(bad), SignatureError);
  bad = agg;
  bad.rsu_id = "rsu-unknown";
  EXPECT_THROW(sp_.Read(bad), SignatureError);
  // N is not signed and not trusted.
  bad = agg;
  bad.n = 99;
  EXPECT_NO_THROW(sp_.Read(bad));
}

TEST_F(Deployment, SpeedsFiftySixtySeventy) {
  SpeedRequest req = rsu_.MakeRequest(50000, 10000);
  std::vector<SpeedReport> reports;
  for (uint64_t speed : {50u, 60u, 70u}) {
    Vehicle v = MakeVehicle("car-" + std::to_string(speed));
    reports.push_back(v.BuildReport({{{2, 1000, speed}}}, req));
  }
  SegmentStats s = sp_.Read(rsu_.VerifyAndAggregate(reports, 50000).report);
  EXPECT_EQ(s.counts[2], 3u);
  EXPECT_EQ(s.speed_sums[2], 180u);
  EXPECT_EQ(s.averages[2], std::optional<uint64_t>(60));
  EXPECT_EQ(s.counts[0], 0u);
  EXPECT_FALSE(s.averages[0]);

  TrafficBulletin b = sp_.Publish(s, "rsu-1", req.ts);
  ASSERT_EQ(b.entries.size(), 4u);
  EXPECT_EQ(b.entries[2].average, std::optional<uint64_t>(60));
  EXPECT_FALSE(b.entries[0].average);
}

TEST_F(Deployment, TrpmAggregateMatchesPptm) {
  SpeedRequest req = rsu_.MakeRequest(50000, 10000);
  std::vector<SpeedReport> p;
  std::vector<TrpmReport> t;
  Rng rng(31);
  for (int j = 0; j < 6; ++j) {
    Vehicle v = MakeVehicle("car-" + std::to_string(j));
    TrajectoryLog log = testgen::Log(rng, 4, 150, 5, 3000);
    p.push_back(v.BuildReport(log, req));
    t.push_back(v.BuildTrpmReport(log, req));
  }
  OpCounter rsu_ops, sp_ops;
  TrpmOutcome out = rsu_.VerifyAndAggregateTrpm(t, 50000, &rsu_ops);
  EXPECT_EQ(rsu_ops.pairing, 7u);
  EXPECT_EQ(sp_.ReadTrpm(out.report, &sp_ops),
            sp_.Read(rsu_.VerifyAndAggregate(p, 50000).report));
  EXPECT_EQ(sp_ops.exp_n2, 4u);
  EXPECT_EQ(sp_ops.pairing, 2u);
  // Wrong ciphertext count is malformed.
  t[0].c.pop_back();
  TrpmOutcome short_out = rsu_.VerifyAndAggregateTrpm(t, 50000);
  ASSERT_FALSE(short_out.rejected.empty());
  EXPECT_EQ(short_out.rejected[0].reason, RejectReason::kMalformed);
}

// Property: random logs through the whole pipeline match the no-crypto
// sums, and vehicle-segment incidences are conserved.
TEST_F(Deployment, PipelineMatchesPlaintextOracle) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    int64_t now = 100000 * static_cast<int64_t>(seed);
    SpeedRequest req =
        rsu_.MakeRequest(now, static_cast<int64_t>(rng.Below(8000)));
    size_t n = testgen::Between(rng, 1, 10);
    std::vector<SpeedReport> reports;
    seqcode::SegmentVector flags(4, 0), speeds(4, 0);
    uint64_t incidences = 0;
    for (size_t j = 0; j < n; ++j) {
      Vehicle v = MakeVehicle("v" + std::to_string(seed) + "-" +
                              std::to_string(j));
      TrajectoryLog log = testgen::Log(rng, 4, 150, 6, 3000);
      reports.push_back(v.BuildReport(log, req));
      SegmentVectors sv = SelectRecent(log, req.tr, 4, 150);
      for (size_t i = 0; i < 4; ++i) {
        flags[i] += sv.flags[i];
        speeds[i] += sv.speeds[i];
        incidences += sv.flags[i];
      }
    }
    SegmentStats s = sp_.Read(rsu_.VerifyAndAggregate(reports, now).report);
    ASSERT_EQ(s.counts, flags) << testgen::SeedNote(seed);
    ASSERT_EQ(s.speed_sums, speeds) << testgen::SeedNote(seed);
    uint64_t total = 0;
    for (uint64_t c : s.counts) total += c;
    EXPECT_EQ(total, incidences);
  }
}

}  // namespace
}  // namespace pptm::entities
