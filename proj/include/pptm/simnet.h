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

#ifndef PPTM_SIMNET_H_
#define PPTM_SIMNET_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "pptm/common.h"
#include "pptm/entities.h"

// Deterministic discrete-event simulation of request, report, aggregate,
// read and publish rounds over one RSU's coverage area, with a scripted
// adversary on the radio and wired links.
namespace pptm::simnet {

using entities::Scheme;

// One pass over a road segment.
struct Visit {
  size_t segment = 0;
  int64_t entry_ms = 0;
  int64_t exit_ms = 0;
  uint64_t speed = 0;  // scaled units
  friend bool operator==(const Visit&, const Visit&) = default;
};

struct VehicleTrace {
  std::string id;
  std::vector<Visit> visits;
  friend bool operator==(const VehicleTrace&, const VehicleTrace&) = default;
};

struct RequestSpec {
  int64_t time_ms = 0;
  int64_t time_range_ms = 0;
  friend bool operator==(const RequestSpec&, const RequestSpec&) = default;
};

enum class AdversaryKind { kEavesdrop, kTamper, kReplay, kForge, kLink };

const char* AdversaryKindName(AdversaryKind k);

struct AdversaryAction {
  AdversaryKind kind{};
  size_t round = 0;      // request index the action is tied to
  std::string vehicle;   // tamper, replay of a report
  // tamper: pid | y | c1 | c2 | c<i> | ts | sigma
  // replay: request | report
  std::string target;
  size_t byte = 0;       // tamper: byte offset within the field
  uint8_t mask = 0x01;   // tamper: XOR mask
  int64_t delay_ms = 0;  // replay: delay after the original send
  friend bool operator==(const AdversaryAction&,
                         const AdversaryAction&) = default;
};

// Published statistic a scenario file asserts for one round and segment.
struct ExpectedStat {
  size_t round = 0;
  size_t segment = 0;
  uint64_t count = 0;
  std::optional<uint64_t> average;
  friend bool operator==(const ExpectedStat&, const ExpectedStat&) = default;
};

struct Scenario {
  entities::SystemConfig config;
  uint64_t seed = 0;
  Scheme scheme = Scheme::kPptm;
  std::string rsu_id = "rsu-0";
  int64_t collection_window_ms = 1000;
  std::vector<VehicleTrace> vehicles;
  std::vector<RequestSpec> requests;
  std::vector<AdversaryAction> adversary;
  std::vector<ExpectedStat> expected;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Throws CapacityError when the scenario can exceed Q vehicles or speed V,
// InvalidArgumentError for anything else that is malformed.
void Precheck(const Scenario& s);

// The vehicle's local log as of `now`: visits completed by then, oldest
// first.
entities::TrajectoryLog LogAt(const VehicleTrace& trace, int64_t now);

struct RejectRecord {
  std::string vehicle;  // empty when the sender could not be attributed
  std::string reason;
};

struct RoundResult {
  size_t round = 0;
  int64_t request_ts = 0;
  int64_t time_range_ms = 0;
  bool aggregated = false;
  uint32_t reports = 0;  // N accepted into the aggregate
  std::vector<std::string> accepted;
  std::vector<RejectRecord> rejected;
  bool batch_failed = false;
  entities::SegmentStats stats;
  entities::SegmentStats ground_truth;  // over accepted reports, no crypto
  bool matches = false;
  size_t sp_messages = 0;
  size_t sp_ciphertexts = 0;
  std::optional<entities::TrafficBulletin> bulletin;
  size_t reports_built = 0;  // honest reports constructed this round
  uint64_t report_payload_bits = 0;     // one untampered report
  uint64_t aggregate_payload_bits = 0;  // the RSU's aggregate
  OpCounter vehicle_ops;  // report construction, summed over vehicles
  OpCounter rsu_ops;      // verification, aggregation and signing
  OpCounter sp_ops;
};

struct AdversaryRecord {
  size_t index = 0;
  std::string kind;
  std::string detail;
  std::string outcome;
  bool defended = true;
  std::optional<double> linking_accuracy;
};

struct LinkBytes {
  uint64_t messages = 0;
  uint64_t bytes = 0;         // full wire bytes
  uint64_t payload_bits = 0;  // signed fields plus signatures
};

struct ScenarioResult {
  Scheme scheme = Scheme::kPptm;
  uint64_t seed = 0;
  std::vector<RoundResult> rounds;
  std::vector<AdversaryRecord> adversary;
  OpCounter request_verify_ops;  // vehicles checking requests
  OpCounter rsu_request_ops;     // RSU signing requests
  LinkBytes rsu_to_vehicles;
  LinkBytes vehicles_to_rsu;
  LinkBytes rsu_to_sp;
  std::vector<std::string> event_log;

  bool AllRoundsMatch() const;
  bool AllAttacksDefended() const;
  // Deterministic JSON with a fixed key order.
  std::string ToJson() const;
};

// Descriptions of every ExpectedStat the result does not reproduce.
std::vector<std::string> CheckExpectations(const Scenario& s,
                                           const ScenarioResult& r);

// An eavesdropped report as seen on the air: arrival time and raw frame.
struct Observation {
  size_t round = 0;
  int64_t arrival_ms = 0;
  Bytes frame;
  std::string sender;  // ground truth, never used by the attacker
  bool altered = false;  // injected or modified by the adversary
};

class Simulator {
 public:
  explicit Simulator(Scenario scenario);

  ScenarioResult Run();
  // Vehicle-to-RSU traffic recorded during Run().
  const std::vector<Observation>& transcript() const { return transcript_; }
  // Codec of the last run; null before Run().
  const wire::Codec* codec() const { return codec_ ? &*codec_ : nullptr; }

 private:
  struct Event {
    int64_t time;
    uint64_t entity;
    uint64_t seq;
    std::function<void()> action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const;
  };

  void Schedule(int64_t time, uint64_t entity, std::function<void()> action);
  void Log(int64_t time, std::string line);

  Scenario scenario_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  uint64_t next_seq_ = 0;
  int64_t current_time_ = 0;
  std::optional<wire::Codec> codec_;
  ScenarioResult result_;
  std::vector<Observation> transcript_;
};

ScenarioResult RunScenario(const Scenario& s);
// Same scenario under the baseline that encrypts each segment separately.
ScenarioResult RunTrpmScenario(const Scenario& s);

// ---- time-link attack ----

// Plaintext report of the strawman protocol: PID || v || L || t.
struct PlainReport {
  std::string pid;
  uint64_t speed = 0;
  size_t location = 0;  // segment index
  int64_t time_ms = 0;  // time the vehicle left the segment
  std::string sender;   // ground truth
};

// Strawman transcript for two consecutive requests: every vehicle reports
// its latest completed segment in the clear under a fresh pseudonym.
std::pair<std::vector<PlainReport>, std::vector<PlainReport>>
StrawmanTranscript(const Scenario& s, size_t first_round);

// Links each first-round pseudonym to the second-round report whose actual
// passing time best matches distance / speed. Returns the fraction linked
// correctly.
double LinkStrawman(const std::vector<PlainReport>& first,
                    const std::vector<PlainReport>& second,
                    double segment_length_m, uint32_t speed_scale);

// Counts fields of an encrypted report frame that carry plaintext speed or
// location information. Every field must be a pseudonym, group element,
// ciphertext or echoed request timestamp, so the answer is zero unless the
// frame is not a protocol report.
size_t PlaintextSignalFields(const wire::Codec& codec, BytesView frame);

// The same attacker against the encrypted transcript. With no speed or
// location available it falls back to pairing reports by arrival order.
double LinkEncrypted(const wire::Codec& codec,
                     const std::vector<Observation>& transcript,
                     size_t first_round);

// ---- generators ----

struct RandomScenarioOptions {
  int kappa = 80;
  int kappa1 = 128;
  size_t max_segments = 10;
  uint64_t max_vehicles = 20;  // Q
  uint64_t max_speed = 120;    // V
  size_t rounds = 1;
};

// Random traces and one or more requests; vehicle count, M and speeds are
// drawn within the options.
Scenario RandomScenario(uint64_t seed, const RandomScenarioOptions& options);

inline constexpr double kLinkSegmentLengthM = 500.0;

// Vehicles driving the segments in order at distinct constant speeds, with
// two requests far enough apart that every vehicle has moved on. Rerolls
// until no two vehicles share a predicted passing time.
Scenario LinkScenario(uint64_t seed, size_t vehicles, int kappa = 80,
                      int kappa1 = 128);

struct LinkOutcome {
  double strawman_accuracy = 0;
  double encrypted_accuracy = 0;
  size_t plaintext_signal_fields = 0;
  size_t linked_vehicles = 0;
};

// Runs both attacks on a link scenario (rounds 0 and 1).
LinkOutcome RunLinkAttack(const Scenario& s);

}  // namespace pptm::simnet

#endif  // PPTM_SIMNET_H_
