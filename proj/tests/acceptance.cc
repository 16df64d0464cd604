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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "generators.h"
#include "pptm/bench.h"
#include "pptm/bls.h"
#include "pptm/entities.h"
#include "pptm/paillier.h"
#include "pptm/scenario.h"
#include "pptm/seqcode.h"
#include "pptm/serialize.h"
#include "pptm/simnet.h"
#include "pptm/wire.h"

namespace {

using namespace pptm;
using entities::Scheme;

// Tolerances. Everything except the linking bound is exact.
constexpr size_t kPaillierTrials = 1000;
constexpr size_t kPaillierTrialsPerKey = 10;
constexpr size_t kSeqScenarios = 500;
constexpr size_t kPipelineScenarios = 100;
constexpr size_t kTamperTrials = 1000;
constexpr size_t kMaxBatch = 50;
constexpr size_t kReplayTrials = 100;
constexpr size_t kLinkSeeds = 200;
constexpr size_t kLinkVehicles = 20;
constexpr double kLinkBoundTimesN = 1.5;  // mean accuracy <= 1.5 / N

struct Verdict {
  bool pass = true;
  std::string detail;
  void Fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string Fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---- 1 ----

bool PaillierLaws(const paillier::Keypair& kp, Rng& rng) {
  const auto& pk = kp.pk;
  const mpz_class& n = pk.n;
  mpz_class m1 = rng.Below(n), m2 = rng.Below(n), k = rng.Below(n);
  paillier::Ciphertext c1 = paillier::Encrypt(pk, m1, rng);
  paillier::Ciphertext c2 = paillier::Encrypt(pk, m2, rng);
  if (paillier::Decrypt(kp.sk, pk, c1) != m1) return false;
  mpz_class sum = (m1 + m2) % n;
  if (paillier::Decrypt(kp.sk, pk, paillier::Add(pk, c1, c2)) != sum) {
    return false;
  }
  mpz_class prod = (k * m1) % n;
  return paillier::Decrypt(kp.sk, pk, paillier::ScalarMul(pk, c1, k)) == prod;
}

Verdict Criterion1() {
  Verdict v;
  size_t done = 0;
  for (int bits : {64, 256}) {
    Rng rng(Rng::DeriveSeed(1, "paillier/" + std::to_string(bits)));
    paillier::Keypair kp;
    for (size_t t = 0; t < kPaillierTrials; ++t) {
      if (t % kPaillierTrialsPerKey == 0) kp = paillier::GenerateKeypair(bits, rng);
      if (!PaillierLaws(kp, rng)) {
        v.Fail(Fmt("law violated at kappa1=%.0f trial %.0f", bits, t));
      }
      ++done;
    }
  }
  Rng rng(Rng::DeriveSeed(1, "paillier/1024"));
  paillier::Keypair big = paillier::GenerateKeypair(1024, rng);
  if (mpz_sizeinbase(big.pk.n.get_mpz_t(), 2) != 2048 || !PaillierLaws(big, rng)) {
    v.Fail("kappa1=1024 smoke test failed");
  }
  if (v.pass) {
    v.detail = std::to_string(done) +
               " roundtrips at kappa1 64/256 plus kappa1=1024 smoke; "
               "addition and scalar laws exact";
  }
  return v;
}

// ---- 2 ----

Verdict Criterion2() {
  Verdict v;
  for (uint64_t seed = 1; seed <= kSeqScenarios; ++seed) {
    Rng rng(Rng::DeriveSeed(seed, "seqcode-acceptance"));
    size_t m = testgen::Between(rng, 1, 12);
    uint64_t q = testgen::Between(rng, 1, 10);
    uint64_t vmax = testgen::Between(rng, 1, 100);
    size_t n = testgen::Between(rng, 0, q);
    seqcode::SuperIncreasingSeq s =
        seqcode::Generate(m, q, vmax, mpz_class(1) << 1023, rng);
    seqcode::SegmentVector flags(m, 0), speeds(m, 0);
    mpz_class pf = 0, ps = 0;
    for (size_t j = 0; j < n; ++j) {
      entities::SegmentVectors r = testgen::Report(rng, m, vmax);
      for (size_t i = 0; i < m; ++i) {
        flags[i] += r.flags[i];
        speeds[i] += r.speeds[i];
      }
      pf += seqcode::Encode(s, r.flags, seqcode::Role::kFlags);
      ps += seqcode::Encode(s, r.speeds, seqcode::Role::kSpeeds);
    }
    if (seqcode::Decode(s, pf, seqcode::Role::kFlags) != flags ||
        seqcode::Decode(s, ps, seqcode::Role::kSpeeds) != speeds) {
      v.Fail("decode(sum) != plaintext sum, " + testgen::SeedNote(seed));
    }
    // Sharpness: Q vehicles at V in every segment.
    seqcode::SegmentVector full(m, vmax), ones(m, 1);
    mpz_class top = seqcode::Encode(s, full, seqcode::Role::kSpeeds) * q;
    mpz_class topf = seqcode::Encode(s, ones, seqcode::Role::kFlags) * q;
    if (seqcode::Decode(s, top, seqcode::Role::kSpeeds) !=
            seqcode::SegmentVector(m, q * vmax) ||
        seqcode::Decode(s, topf, seqcode::Role::kFlags) !=
            seqcode::SegmentVector(m, q)) {
      v.Fail("capacity edge case failed, " + testgen::SeedNote(seed));
    }
  }
  if (v.pass) {
    v.detail = std::to_string(kSeqScenarios) +
               " scenarios exact, capacity edge (Q vehicles at V) exact";
  }
  return v;
}

// ---- 3 ----

Verdict Criterion3() {
  Verdict v;
  simnet::RandomScenarioOptions o;
  o.max_segments = 12;
  o.max_vehicles = 10;
  o.max_speed = 100;
  o.rounds = 2;
  size_t rounds = 0;
  for (uint64_t seed = 1; seed <= kPipelineScenarios; ++seed) {
    simnet::Scenario s = simnet::RandomScenario(seed, o);
    simnet::ScenarioResult r = simnet::RunScenario(s);
    for (const auto& round : r.rounds) {
      if (!round.aggregated) continue;
      ++rounds;
      // Reference pipeline: logs, TR filter and plain sums, no crypto.
      const size_t m = s.config.segments;
      std::vector<uint64_t> counts(m, 0), sums(m, 0);
      for (const std::string& id : round.accepted) {
        auto it = std::find_if(s.vehicles.begin(), s.vehicles.end(),
                               [&](const auto& t) { return t.id == id; });
        if (it == s.vehicles.end()) {
          v.Fail("unknown accepted vehicle " + id);
          continue;
        }
        entities::SegmentVectors sv = entities::SelectRecent(
            simnet::LogAt(*it, round.request_ts), round.time_range_ms, m,
            s.config.max_speed);
        for (size_t i = 0; i < m; ++i) {
          counts[i] += sv.flags[i];
          sums[i] += sv.speeds[i];
        }
      }
      if (round.accepted.size() != s.vehicles.size()) {
        v.Fail("honest report rejected, " + testgen::SeedNote(seed));
      }
      if (round.stats.counts != counts || round.stats.speed_sums != sums) {
        v.Fail("stats differ from reference, " + testgen::SeedNote(seed));
      }
      for (size_t i = 0; i < m; ++i) {
        std::optional<uint64_t> avg;
        if (counts[i] > 0) avg = entities::DivRoundHalfEven(sums[i], counts[i]);
        if (round.stats.averages[i] != avg) {
          v.Fail("average differs, " + testgen::SeedNote(seed));
        }
      }
    }
  }
  if (v.pass) {
    v.detail = std::to_string(kPipelineScenarios) + " scenarios, " +
               std::to_string(rounds) +
               " aggregated rounds identical to the reference pipeline";
  }
  return v;
}

// ---- 4 ----

wire::Frame FlipBit(wire::Frame f, size_t field, Rng& rng) {
  Bytes& b = f.fields[field];
  if (b.empty()) {
    b.push_back(0x01);
  } else {
    b[rng.Below(b.size())] ^= static_cast<uint8_t>(1u << rng.Below(8));
  }
  return f;
}

Verdict Criterion4() {
  Verdict v;
  entities::SystemConfig config;  // default kappa 160, kappa1 512
  config.segments = 4;
  config.max_vehicles = 10;
  config.pseudonyms_per_vehicle = 40;
  entities::TrustAuthority ta(config, 4);
  entities::RoadsideUnit rsu(ta.RegisterRsu("rsu-acc"));
  entities::ServiceProvider sp(ta.ServiceProviderMaterial());
  entities::Vehicle car("car", ta.RegisterVehicle("car", "rsu-acc"), 4);
  const wire::Codec& codec = rsu.codec();
  Rng rng(Rng::DeriveSeed(4, "tamper"));

  size_t honest = 0, rejected = 0;
  int64_t now = 100000;
  entities::SpeedRequest req = rsu.MakeRequest(now, 5000);
  entities::SpeedReport rep = car.BuildReport({{{1, 2000, 90}}}, req);
  entities::AggregatedReport agg =
      rsu.VerifyAndAggregate(std::span(&rep, 1), now).report;
  honest += car.VerifyRequest(req, now);
  honest += sig::Verify(codec.group(), rep.y, codec.SignedBytes(rep), rep.sigma);
  try {
    sp.Read(agg);
    ++honest;
  } catch (const Error&) {
  }
  wire::Frame fq = codec.ToFrame(req), fr = codec.ToFrame(rep),
              fa = codec.ToFrame(agg);
  for (size_t t = 0; t < kTamperTrials; ++t) {
    const size_t kind = t % 3;
    bool accepted = false;
    try {
      if (kind == 0) {  // rsu_id, ts, tr, sigma
        wire::Frame f = FlipBit(fq, rng.Below(4), rng);
        accepted = car.VerifyRequest(
            codec.DecodeRequest(wire::SerializeFrame(f)), now);
      } else if (kind == 1) {  // pid, y, c1, c2, ts, sigma
        wire::Frame f = FlipBit(fr, rng.Below(6), rng);
        entities::SpeedReport d = codec.DecodeReport(wire::SerializeFrame(f));
        accepted = sig::Verify(codec.group(), d.y, codec.SignedBytes(d), d.sigma);
      } else {  // rsu_id, c1, c2, ts, sigma
        wire::Frame f = FlipBit(fa, rng.Below(5), rng);
        sp.Read(codec.DecodeAggregate(wire::SerializeFrame(f)));
        accepted = true;
      }
    } catch (const Error&) {
    }
    rejected += !accepted;
  }
  if (honest != 3) v.Fail("honest message failed verification");
  if (rejected != kTamperTrials) {
    v.Fail(std::to_string(kTamperTrials - rejected) + " tampered messages accepted");
  }

  // Batch against individual verification on honest batches.
  pairing::GroupParams gp = ta.group();
  std::vector<sig::KeyPair> keys;
  std::vector<Bytes> msgs;
  std::vector<sig::Signature> sigs;
  for (size_t j = 0; j < kMaxBatch; ++j) {
    keys.push_back(sig::KeyGen(gp, rng));
    msgs.push_back(ToBytes("report-" + std::to_string(j)));
    sigs.push_back(sig::Sign(gp, keys[j].sk, msgs[j]));
  }
  size_t individual_ok = 0;
  for (size_t j = 0; j < kMaxBatch; ++j) {
    individual_ok += sig::Verify(gp, keys[j].vk, msgs[j], sigs[j]);
  }
  if (individual_ok != kMaxBatch) v.Fail("honest signature rejected");
  for (size_t n = 1; n <= kMaxBatch; ++n) {
    std::vector<sig::BatchItem> items;
    for (size_t j = 0; j < n; ++j) items.push_back({&keys[j].vk, msgs[j], &sigs[j]});
    OpCounter ops;
    if (!sig::BatchVerify(gp, items, &ops)) {
      v.Fail("batch disagrees with individual at N=" + std::to_string(n));
    }
    if (ops.pairing != n + 1) {
      v.Fail("batch of " + std::to_string(n) + " used " +
             std::to_string(ops.pairing) + " pairings");
    }
  }
  if (v.pass) {
    v.detail = "3/3 honest verified, " + std::to_string(rejected) + "/" +
               std::to_string(kTamperTrials) +
               " bit flips rejected, batch N=1..50 agrees with N+1 pairings";
  }
  return v;
}

// ---- 5 ----

Verdict Criterion5() {
  Verdict v;
  bench::BenchSpec spec;
  for (size_t m = 1; m <= 30; ++m) spec.segments.push_back(m);
  for (size_t n = 1; n <= 50; ++n) spec.reports.push_back(n);
  bench::BenchResult r = bench::RunBench(spec);
  if (!r.Mismatches().empty()) {
    v.Fail(std::to_string(r.Mismatches().size()) + " rows differ from formulas");
  }
  if (r.rows.size() != 2 * 30 * 50 * 3) v.Fail("incomplete sweep");
  for (const auto& row : r.rows) {
    uint64_t exp = row.counts.exp_n2;
    bool pptm = row.scheme == Scheme::kPptm;
    if (row.role == bench::Role::kVehicle && exp != (pptm ? 2 : row.m)) {
      v.Fail("vehicle exponentiations not 2 / M");
    }
    if (row.role == bench::Role::kSp && exp != (pptm ? 2 : row.m)) {
      v.Fail("SP exponentiations not 2 / M");
    }
    if (row.role == bench::Role::kRsu && row.counts.pairing != row.n + 1) {
      v.Fail("RSU pairings not N+1");
    }
  }
  if (v.pass) {
    v.detail = std::to_string(r.rows.size()) +
               " rows for M 1..30 x N 1..50 equal the symbolic counts";
  }
  return v;
}

// ---- 6 ----

Verdict Criterion6() {
  Verdict v;
  const wire::FieldWidths ref = wire::FieldWidths::Reference();
  if (wire::VehicleReportBits(ref, Scheme::kPptm, 10) != 4616) {
    v.Fail("PPTM report is not 4616 bits");
  }
  for (size_t m = 1; m <= 30; ++m) {
    if (wire::VehicleReportBits(ref, Scheme::kPptm, m) != 4616 ||
        wire::VehicleReportBits(ref, Scheme::kTrpm, m) !=
            100 + 160 + 2048 * m + 100 + 160 ||
        wire::AggregateBits(ref, Scheme::kPptm, m) != 100 + 2 * 2048 + 100 + 160 ||
        wire::AggregateBits(ref, Scheme::kTrpm, m) != 100 + 2048 * m + 100 + 160) {
      v.Fail("closed form wrong at M=" + std::to_string(m));
    }
  }

  // Real frames at the default parameters follow the same forms.
  entities::SystemConfig config;
  config.segments = 3;
  config.max_vehicles = 10;
  entities::TrustAuthority ta(config, 6);
  entities::RoadsideUnit rsu(ta.RegisterRsu("rsu-6"));
  entities::Vehicle car("car", ta.RegisterVehicle("car", "rsu-6"), 6);
  const wire::Codec& codec = rsu.codec();
  entities::SpeedRequest req = rsu.MakeRequest(50000, 5000);
  entities::TrajectoryLog log{{{0, 1000, 60}}};
  entities::SpeedReport rep = car.BuildReport(log, req);
  entities::TrpmReport trep = car.BuildTrpmReport(log, rsu.MakeRequest(60000, 5000));
  entities::AggregatedReport agg =
      rsu.VerifyAndAggregate(std::span(&rep, 1), 50000).report;
  entities::TrpmAggregate tagg =
      rsu.VerifyAndAggregateTrpm(std::span(&trep, 1), 60000).report;
  wire::FieldWidths w = codec.Widths(rep.pid.size(), req.rsu_id.size());
  if (w.ciphertext_bits != 2048) v.Fail("ciphertexts are not 2048 bits");
  for (size_t m = 1; m <= 30; ++m) {
    entities::TrpmReport t = trep;
    t.c.assign(m, trep.c[0]);
    entities::TrpmAggregate ta2 = tagg;
    ta2.c.assign(m, tagg.c[0]);
    if (wire::PayloadBits(codec.ToFrame(rep)) !=
            wire::VehicleReportBits(w, Scheme::kPptm, m) ||
        wire::PayloadBits(codec.ToFrame(t)) !=
            wire::VehicleReportBits(w, Scheme::kTrpm, m) ||
        wire::PayloadBits(codec.ToFrame(agg)) !=
            wire::AggregateBits(w, Scheme::kPptm, m) ||
        wire::PayloadBits(codec.ToFrame(ta2)) !=
            wire::AggregateBits(w, Scheme::kTrpm, m)) {
      v.Fail("serialized size off the closed form at M=" + std::to_string(m));
    }
  }
  if (v.pass) {
    v.detail = "S_v = 4616 bits, TRPM and S_S linear in M for M 1..30; "
               "serialized frames match at " +
               std::to_string(wire::VehicleReportBits(w, Scheme::kPptm, 1)) +
               " bits with native widths";
  }
  return v;
}

// ---- 7 ----

template <typename T>
concept HoldsPaillierSecret = requires(T t) { t.sk; };
static_assert(!HoldsPaillierSecret<entities::RsuMaterial>);
static_assert(!HoldsPaillierSecret<entities::RoadsideUnit>);
static_assert(HoldsPaillierSecret<entities::SpMaterial>);

Verdict Criterion7() {
  Verdict v;
  simnet::RandomScenarioOptions o;
  o.max_segments = 5;
  o.max_vehicles = 6;
  o.rounds = 2;
  size_t trials = 0, replays = 0, replays_rejected = 0;
  for (uint64_t seed = 1; trials < kReplayTrials; ++seed) {
    simnet::Scenario s = simnet::RandomScenario(seed, o);
    if (s.vehicles.empty()) continue;
    ++trials;
    simnet::AdversaryAction same;
    same.kind = simnet::AdversaryKind::kReplay;
    same.target = "report";
    same.vehicle = s.vehicles[0].id;
    same.delay_ms = 100;
    simnet::AdversaryAction late = same;
    late.delay_ms = s.requests[1].time_ms - s.requests[0].time_ms;
    simnet::AdversaryAction request;
    request.kind = simnet::AdversaryKind::kReplay;
    request.target = "request";
    request.delay_ms = s.config.freshness_window_ms + 1 +
                       static_cast<int64_t>(seed % 1000);
    s.adversary = {same, late, request};
    simnet::ScenarioResult r = simnet::RunScenario(s);
    for (const auto& rec : r.adversary) {
      ++replays;
      replays_rejected += rec.defended;
    }
    if (!r.AllRoundsMatch()) v.Fail("replay changed statistics, " + testgen::SeedNote(seed));
  }
  if (replays_rejected != replays) {
    v.Fail(std::to_string(replays - replays_rejected) + " replays accepted");
  }

  // No Paillier secret anywhere in what the RSU holds or receives.
  entities::TrustAuthority ta(testgen::SmallConfig(3, 5, 100), 7);
  std::string rsu_json = serialize::ToJson(ta.RegisterRsu("rsu-7"));
  if (rsu_json.find("\"lambda\"") != std::string::npos ||
      rsu_json.find("\"mu\"") != std::string::npos) {
    v.Fail("RSU material carries lambda/mu");
  }

  // One ciphertext pair per round whatever N is.
  for (size_t n : {1, 5, 10, 20}) {
    simnet::Scenario s = simnet::LinkScenario(n, n);
    simnet::ScenarioResult r = simnet::RunScenario(s);
    for (const auto& round : r.rounds) {
      if (round.aggregated && (round.sp_messages != 1 || round.sp_ciphertexts != 2)) {
        v.Fail("SP received more than one pair with N=" + std::to_string(n));
      }
    }
  }

  double strawman_min = 1.0, encrypted_sum = 0;
  size_t signal = 0;
  for (uint64_t seed = 1; seed <= kLinkSeeds; ++seed) {
    simnet::LinkOutcome out =
        simnet::RunLinkAttack(simnet::LinkScenario(seed, kLinkVehicles));
    strawman_min = std::min(strawman_min, out.strawman_accuracy);
    encrypted_sum += out.encrypted_accuracy;
    signal += out.plaintext_signal_fields;
  }
  const double mean = encrypted_sum / kLinkSeeds;
  const double bound = kLinkBoundTimesN / kLinkVehicles;
  if (strawman_min != 1.0) v.Fail(Fmt("strawman accuracy %.3f", strawman_min));
  if (mean > bound) v.Fail(Fmt("encrypted linking %.4f > %.4f", mean, bound));
  if (signal != 0) v.Fail("plaintext signal in encrypted frames");
  if (v.pass) {
    v.detail = std::to_string(replays_rejected) + "/" + std::to_string(replays) +
               " replays rejected; RSU holds no sk; one pair per round; " +
               Fmt("linking strawman %.2f, encrypted mean %.4f (bound %.4f)",
                   strawman_min, mean, bound);
  }
  return v;
}

// ---- 8 ----

std::string SourceDir() {
  const char* dir = std::getenv("PPTM_SOURCE_DIR");
  return dir ? dir : ".";
}

Verdict Criterion8() {
  Verdict v;
  simnet::Scenario base;
  base.config.kappa = 80;
  base.config.kappa1 = 128;
  for (const char* name : {"demo.scn", "attacks.scn"}) {
    simnet::Scenario s =
        scenario::LoadFile(SourceDir() + "/scenarios/" + name, base);
    simnet::ScenarioResult a = simnet::RunScenario(s), b = simnet::RunScenario(s);
    if (a.ToJson() != b.ToJson() ||
        bench::FromScenario(s, a).ToCsv() != bench::FromScenario(s, b).ToCsv()) {
      v.Fail(std::string(name) + " differs between runs");
    }
  }
  simnet::RandomScenarioOptions o;
  o.rounds = 2;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    simnet::Scenario s = simnet::RandomScenario(seed, o);
    if (simnet::RunScenario(s).ToJson() != simnet::RunScenario(s).ToJson()) {
      v.Fail("random scenario differs, " + testgen::SeedNote(seed));
    }
  }
  bench::BenchSpec spec;
  spec.segments = {1, 5};
  spec.reports = {1, 3};
  if (bench::RunBench(spec).ToCsv() != bench::RunBench(spec).ToCsv()) {
    v.Fail("bench CSV differs");
  }
  entities::TrustAuthority t1(testgen::SmallConfig(3, 5, 100), 8);
  entities::TrustAuthority t2(testgen::SmallConfig(3, 5, 100), 8);
  if (serialize::ToJson(t1.RegisterRsu("r")) != serialize::ToJson(t2.RegisterRsu("r")) ||
      serialize::ToJson(t1.RegisterVehicle("c", "r")) !=
          serialize::ToJson(t2.RegisterVehicle("c", "r"))) {
    v.Fail("key material differs");
  }
  if (v.pass) {
    v.detail = "scenario JSON, bench CSV and key material byte-identical on rerun";
  }
  return v;
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria = {
      Criterion1, Criterion2, Criterion3, Criterion4,
      Criterion5, Criterion6, Criterion7, Criterion8};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v.Fail(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                   .count();
    std::printf("criterion %zu: %s  %s  (%.1f s)\n", i + 1,
                v.pass ? "PASS" : "FAIL", v.detail.c_str(), s);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed;
}
