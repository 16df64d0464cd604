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

#include "pptm/simnet.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"
#include "pptm/bigint.h"

namespace pptm::simnet {

namespace {

using entities::SegmentStats;
using nlohmann::ordered_json;

constexpr uint64_t kRsuEntity = 0;
constexpr uint64_t kSpEntity = 1;
constexpr uint64_t kVehicleEntityBase = 2;
constexpr uint64_t kAdversaryEntity = uint64_t{1} << 40;

// Link latencies in milliseconds, [lo, hi].
constexpr int64_t kDownMin = 2, kDownMax = 20;
constexpr int64_t kUpMin = 5, kUpMax = 50;
constexpr int64_t kWiredMin = 5, kWiredMax = 50;

int64_t Latency(uint64_t seed, const std::string& label, int64_t lo,
                int64_t hi) {
  Rng rng(Rng::DeriveSeed(seed, label));
  return lo + static_cast<int64_t>(rng.Below(static_cast<uint64_t>(hi - lo + 1)));
}

std::string At(int64_t t) { return "t=" + std::to_string(t) + " "; }

SegmentStats ZeroStats(size_t segments) {
  return entities::MakeStats(std::vector<uint64_t>(segments, 0),
                             std::vector<uint64_t>(segments, 0));
}

// Index of a named field in a report frame, or nullopt.
std::optional<size_t> FieldIndex(Scheme scheme, size_t segments,
                                 const std::string& name) {
  if (name == "pid") return 0;
  if (name == "y") return 1;
  if (scheme == Scheme::kPptm) {
    if (name == "c1") return 2;
    if (name == "c2") return 3;
    if (name == "ts") return 4;
    if (name == "sigma") return 5;
    return std::nullopt;
  }
  if (name == "ts") return segments + 2;
  if (name == "sigma") return segments + 3;
  if (name.size() >= 2 && name[0] == 'c') {
    size_t i = 0;
    try {
      i = std::stoul(name.substr(1));
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (i >= 1 && i <= segments) return 1 + i;
  }
  return std::nullopt;
}

ordered_json StatsJson(const SegmentStats& s) {
  ordered_json avg = ordered_json::array();
  for (const auto& a : s.averages) {
    avg.push_back(a ? ordered_json(*a) : ordered_json(nullptr));
  }
  return ordered_json{{"counts", s.counts},
                      {"speed_sums", s.speed_sums},
                      {"averages", avg}};
}

ordered_json OpsJson(const OpCounter& c) {
  return ordered_json{{"exp_n2", c.exp_n2},
                      {"pairing", c.pairing},
                      {"mul_g", c.mul_g},
                      {"mul_n2", c.mul_n2},
                      {"hash_to_group", c.hash_to_group},
                      {"add_g", c.add_g}};
}

ordered_json LinkJson(const LinkBytes& l) {
  return ordered_json{{"messages", l.messages},
                      {"bytes", l.bytes},
                      {"payload_bits", l.payload_bits}};
}

}  // namespace

const char* AdversaryKindName(AdversaryKind k) {
  switch (k) {
    case AdversaryKind::kEavesdrop:
      return "eavesdrop";
    case AdversaryKind::kTamper:
      return "tamper";
    case AdversaryKind::kReplay:
      return "replay";
    case AdversaryKind::kForge:
      return "forge";
    case AdversaryKind::kLink:
      return "link";
  }
  return "unknown";
}

void Precheck(const Scenario& s) {
  s.config.Validate();
  const auto& c = s.config;
  if (s.collection_window_ms <= 0) {
    throw InvalidArgumentError("collection window must be positive");
  }
  if (s.rsu_id.empty()) throw InvalidArgumentError("empty RSU identity");
  if (s.vehicles.size() > c.max_vehicles) {
    throw CapacityError("scenario has " + std::to_string(s.vehicles.size()) +
                        " vehicles but Q = " + std::to_string(c.max_vehicles));
  }
  std::set<std::string> ids;
  for (const VehicleTrace& v : s.vehicles) {
    if (v.id.empty() || v.id.size() > 255) {
      throw InvalidArgumentError("vehicle identity must be 1..255 bytes");
    }
    if (!ids.insert(v.id).second) {
      throw InvalidArgumentError("duplicate vehicle " + v.id);
    }
    for (const Visit& visit : v.visits) {
      if (visit.segment >= c.segments) {
        throw InvalidArgumentError("vehicle " + v.id + " visits segment " +
                                   std::to_string(visit.segment) +
                                   " outside M");
      }
      if (visit.exit_ms < visit.entry_ms) {
        throw InvalidArgumentError("vehicle " + v.id + " exits before entry");
      }
      if (visit.speed > c.max_speed) {
        throw CapacityError("vehicle " + v.id + " speed " +
                            std::to_string(visit.speed) + " exceeds V = " +
                            std::to_string(c.max_speed));
      }
    }
  }
  for (size_t r = 0; r < s.requests.size(); ++r) {
    if (s.requests[r].time_range_ms < 0) {
      throw InvalidArgumentError("negative time range");
    }
    if (r > 0 && s.requests[r].time_ms <
                     s.requests[r - 1].time_ms + s.collection_window_ms) {
      throw InvalidArgumentError("requests overlap their collection windows");
    }
  }
  for (const AdversaryAction& a : s.adversary) {
    bool needs_round = a.kind != AdversaryKind::kEavesdrop;
    if (needs_round && a.round >= s.requests.size()) {
      throw InvalidArgumentError("adversary action refers to missing round");
    }
    if (a.kind == AdversaryKind::kLink && a.round + 1 >= s.requests.size()) {
      throw InvalidArgumentError("link attempt needs two consecutive rounds");
    }
    bool needs_vehicle =
        a.kind == AdversaryKind::kTamper ||
        (a.kind == AdversaryKind::kReplay && a.target == "report");
    if (needs_vehicle && !ids.contains(a.vehicle)) {
      throw InvalidArgumentError("adversary action names unknown vehicle '" +
                                 a.vehicle + "'");
    }
    if (a.kind == AdversaryKind::kTamper &&
        !FieldIndex(s.scheme, c.segments, a.target)) {
      throw InvalidArgumentError("unknown tamper field '" + a.target + "'");
    }
    if (a.kind == AdversaryKind::kTamper && a.mask == 0) {
      throw InvalidArgumentError("tamper mask must be nonzero");
    }
    if (a.kind == AdversaryKind::kReplay && a.target != "request" &&
        a.target != "report") {
      throw InvalidArgumentError("replay target must be request or report");
    }
    if (a.kind == AdversaryKind::kReplay && a.delay_ms < 0) {
      throw InvalidArgumentError("negative replay delay");
    }
  }
  for (const ExpectedStat& e : s.expected) {
    if (e.round >= s.requests.size() || e.segment >= c.segments) {
      throw InvalidArgumentError("expectation refers to missing round or "
                                 "segment");
    }
  }
}

std::vector<std::string> CheckExpectations(const Scenario& s,
                                           const ScenarioResult& r) {
  std::vector<std::string> out;
  for (const ExpectedStat& e : s.expected) {
    std::string where = "round " + std::to_string(e.round) + " segment " +
                        std::to_string(e.segment);
    if (e.round >= r.rounds.size() || !r.rounds[e.round].aggregated) {
      out.push_back(where + ": no statistics published");
      continue;
    }
    const entities::SegmentStats& st = r.rounds[e.round].stats;
    if (st.counts.at(e.segment) != e.count ||
        st.averages.at(e.segment) != e.average) {
      out.push_back(where + ": expected count " + std::to_string(e.count) +
                    " average " +
                    (e.average ? std::to_string(*e.average) : "-") +
                    ", got count " + std::to_string(st.counts[e.segment]) +
                    " average " +
                    (st.averages[e.segment]
                         ? std::to_string(*st.averages[e.segment])
                         : "-"));
    }
  }
  return out;
}

entities::TrajectoryLog LogAt(const VehicleTrace& trace, int64_t now) {
  std::vector<Visit> done;
  for (const Visit& v : trace.visits) {
    if (v.exit_ms <= now) done.push_back(v);
  }
  std::stable_sort(done.begin(), done.end(), [](const Visit& a, const Visit& b) {
    return std::tie(a.exit_ms, a.entry_ms) < std::tie(b.exit_ms, b.entry_ms);
  });
  entities::TrajectoryLog log;
  for (const Visit& v : done) {
    log.entries.push_back({v.segment, v.exit_ms - v.entry_ms, v.speed});
  }
  return log;
}

bool ScenarioResult::AllRoundsMatch() const {
  return std::all_of(rounds.begin(), rounds.end(),
                     [](const RoundResult& r) { return r.matches; });
}

bool ScenarioResult::AllAttacksDefended() const {
  return std::all_of(adversary.begin(), adversary.end(),
                     [](const AdversaryRecord& a) { return a.defended; });
}

std::string ScenarioResult::ToJson() const {
  ordered_json j;
  j["scheme"] = scheme == Scheme::kPptm ? "pptm" : "trpm";
  j["seed"] = seed;
  ordered_json rs = ordered_json::array();
  for (const RoundResult& r : rounds) {
    ordered_json rej = ordered_json::array();
    for (const RejectRecord& x : r.rejected) {
      rej.push_back({{"vehicle", x.vehicle}, {"reason", x.reason}});
    }
    ordered_json round{{"round", r.round},
                       {"request_ts", r.request_ts},
                       {"time_range_ms", r.time_range_ms},
                       {"aggregated", r.aggregated},
                       {"reports", r.reports},
                       {"accepted", r.accepted},
                       {"rejected", rej},
                       {"batch_failed", r.batch_failed},
                       {"stats", StatsJson(r.stats)},
                       {"ground_truth", StatsJson(r.ground_truth)},
                       {"matches", r.matches},
                       {"sp_messages", r.sp_messages},
                       {"sp_ciphertexts", r.sp_ciphertexts},
                       {"reports_built", r.reports_built},
                       {"report_payload_bits", r.report_payload_bits},
                       {"aggregate_payload_bits", r.aggregate_payload_bits},
                       {"vehicle_ops", OpsJson(r.vehicle_ops)},
                       {"rsu_ops", OpsJson(r.rsu_ops)},
                       {"sp_ops", OpsJson(r.sp_ops)}};
    rs.push_back(std::move(round));
  }
  j["rounds"] = std::move(rs);
  ordered_json adv = ordered_json::array();
  for (const AdversaryRecord& a : adversary) {
    ordered_json rec{{"index", a.index},
                     {"kind", a.kind},
                     {"detail", a.detail},
                     {"outcome", a.outcome},
                     {"defended", a.defended}};
    if (a.linking_accuracy) rec["linking_accuracy"] = *a.linking_accuracy;
    adv.push_back(std::move(rec));
  }
  j["adversary"] = std::move(adv);
  j["counters"] = ordered_json{{"rsu_request", OpsJson(rsu_request_ops)},
                               {"vehicle_request_verify",
                                OpsJson(request_verify_ops)}};
  j["links"] = ordered_json{{"rsu_to_vehicles", LinkJson(rsu_to_vehicles)},
                            {"vehicles_to_rsu", LinkJson(vehicles_to_rsu)},
                            {"rsu_to_sp", LinkJson(rsu_to_sp)}};
  j["all_rounds_match"] = AllRoundsMatch();
  j["all_attacks_defended"] = AllAttacksDefended();
  j["event_log"] = event_log;
  return j.dump(2);
}

// ---- simulator ----

bool Simulator::Later::operator()(const Event& a, const Event& b) const {
  return std::tie(a.time, a.entity, a.seq) > std::tie(b.time, b.entity, b.seq);
}

Simulator::Simulator(Scenario scenario) : scenario_(std::move(scenario)) {}

void Simulator::Schedule(int64_t time, uint64_t entity,
                         std::function<void()> action) {
  queue_.push(Event{time, entity, next_seq_++, std::move(action)});
}

void Simulator::Log(int64_t time, std::string line) {
  result_.event_log.push_back(At(time) + std::move(line));
}

ScenarioResult Simulator::Run() {
  Precheck(scenario_);
  const Scenario& s = scenario_;
  const auto& cfg = s.config;
  const bool trpm = s.scheme == Scheme::kTrpm;
  result_ = ScenarioResult{};
  result_.scheme = s.scheme;
  result_.seed = s.seed;
  transcript_.clear();

  entities::TrustAuthority ta(cfg, s.seed);
  entities::RoadsideUnit rsu(ta.RegisterRsu(s.rsu_id));
  entities::ServiceProvider sp(ta.ServiceProviderMaterial());
  codec_.emplace(rsu.codec());
  const wire::Codec& codec = *codec_;

  std::vector<entities::Vehicle> vehicles;
  std::map<std::string, size_t> vehicle_index;
  for (size_t k = 0; k < s.vehicles.size(); ++k) {
    const std::string& id = s.vehicles[k].id;
    vehicles.emplace_back(id, ta.RegisterVehicle(id, s.rsu_id),
                          Rng::DeriveSeed(s.seed, "vehicle-rng/" + id));
    vehicle_index[id] = k;
  }

  // Per-round bookkeeping.
  struct Pending {
    Bytes frame;
    std::string sender;
  };
  struct RoundState {
    bool open = false;
    Bytes request_frame;
    std::vector<Pending> frames;
  };
  std::vector<RoundState> rounds(s.requests.size());
  result_.rounds.resize(s.requests.size());

  // Simulator-side knowledge used only for ground truth and attribution.
  std::map<Bytes, std::string> pid_owner;
  std::map<Bytes, entities::SegmentVectors> pid_truth;
  std::vector<std::multiset<Bytes>> accepted_pids(s.requests.size());

  // Adversary tallies.
  struct Tally {
    uint64_t delivered = 0;
    uint64_t rejected = 0;
    uint64_t ignored = 0;
    uint64_t answered = 0;
    std::optional<Bytes> pid;  // tampered or replayed report's PID
    std::optional<size_t> absorbed_round;
    bool dropped = false;
  };
  std::vector<Tally> tallies(s.adversary.size());
  std::set<Bytes> altered;  // frames the adversary modified in flight

  std::function<void(size_t, size_t, const Bytes&, std::optional<size_t>)>
      deliver_request;
  std::function<void(const Bytes&, const std::string&, std::optional<size_t>)>
      receive_report;

  deliver_request = [&](size_t k, size_t round, const Bytes& frame,
                        std::optional<size_t> action) {
    entities::Vehicle& v = vehicles[k];
    const VehicleTrace& trace = s.vehicles[k];
    const int64_t now = current_time_;
    Tally* tally = action ? &tallies[*action] : nullptr;
    if (tally) ++tally->delivered;

    entities::SpeedRequest req;
    try {
      req = codec.DecodeRequest(frame);
    } catch (const DecodeError&) {
      if (tally) ++tally->rejected;
      Log(now, v.identity() + " drops malformed request");
      return;
    }
    if (!v.VerifyRequest(req, now, &result_.request_verify_ops)) {
      if (tally) ++tally->rejected;
      Log(now, v.identity() + " rejects request ts=" + std::to_string(req.ts));
      return;
    }
    if (v.HasAnswered(req)) {
      if (tally) ++tally->ignored;
      Log(now, v.identity() + " ignores repeated request ts=" +
                   std::to_string(req.ts));
      return;
    }
    if (tally) ++tally->answered;
    if (v.NeedsRegistration()) {
      v.Reregister(ta.RegisterVehicle(v.identity(), s.rsu_id));
      Log(now, v.identity() + " re-registers for new pseudonyms");
    }

    entities::TrajectoryLog log = LogAt(trace, now);
    OpCounter& ops = result_.rounds[round].vehicle_ops;
    Bytes out;
    Bytes pid;
    if (trpm) {
      entities::TrpmReport r = v.BuildTrpmReport(log, req, &ops);
      pid = r.pid;
      out = codec.Encode(r);
    } else {
      entities::SpeedReport r = v.BuildReport(log, req, &ops);
      pid = r.pid;
      out = codec.Encode(r);
    }
    result_.rounds[round].reports_built += 1;
    result_.rounds[round].report_payload_bits =
        wire::PayloadBits(wire::ParseFrame(out));
    pid_owner[pid] = v.identity();
    pid_truth[pid] =
        entities::SelectRecent(log, req.tr, cfg.segments, cfg.max_speed);

    const int64_t send = now;
    for (size_t i = 0; i < s.adversary.size(); ++i) {
      const AdversaryAction& a = s.adversary[i];
      if (a.round != round || a.vehicle != v.identity()) continue;
      if (a.kind == AdversaryKind::kReplay && a.target == "report") {
        Bytes copy = out;
        tallies[i].pid = pid;
        Schedule(send + a.delay_ms, kAdversaryEntity, [&, copy, i] {
          Log(current_time_, "adversary replays report (action " +
                                 std::to_string(i) + ")");
          receive_report(copy, "adversary", i);
        });
      }
    }
    for (size_t i = 0; i < s.adversary.size(); ++i) {
      const AdversaryAction& a = s.adversary[i];
      if (a.kind != AdversaryKind::kTamper || a.round != round ||
          a.vehicle != v.identity()) {
        continue;
      }
      wire::Frame f = wire::ParseFrame(out);
      size_t idx = *FieldIndex(s.scheme, cfg.segments, a.target);
      Bytes& field = f.fields[idx];
      field[a.byte % field.size()] ^= a.mask;
      out = wire::SerializeFrame(f);
      altered.insert(out);
      tallies[i].pid = pid;
      Log(now, "adversary flips " + a.target + " of " + v.identity() +
                   "'s report");
    }

    const int64_t arrive =
        send + Latency(s.seed, "up/" + std::to_string(round) + "/" +
                                   v.identity(),
                       kUpMin, kUpMax);
    std::string sender = v.identity();
    Schedule(arrive, kRsuEntity, [&, out, sender] {
      receive_report(out, sender, std::nullopt);
    });
  };

  receive_report = [&](const Bytes& frame, const std::string& sender,
                       std::optional<size_t> action) {
    const int64_t now = current_time_;
    std::optional<size_t> open;
    for (size_t r = 0; r < rounds.size(); ++r) {
      if (rounds[r].open) open = r;
    }
    result_.vehicles_to_rsu.messages += 1;
    result_.vehicles_to_rsu.bytes += frame.size();
    try {
      result_.vehicles_to_rsu.payload_bits +=
          wire::PayloadBits(wire::ParseFrame(frame));
    } catch (const DecodeError&) {
    }
    transcript_.push_back(Observation{
        open.value_or(SIZE_MAX), now, frame, sender,
        sender == "adversary" || altered.contains(frame)});
    if (!open) {
      Log(now, "rsu drops report outside any collection window");
      if (action) tallies[*action].dropped = true;
      return;
    }
    rounds[*open].frames.push_back({frame, sender});
    if (action) tallies[*action].absorbed_round = *open;
  };

  auto close_round = [&](size_t r) {
    const int64_t now = current_time_;
    RoundState& state = rounds[r];
    RoundResult& rr = result_.rounds[r];
    state.open = false;
    rr.stats = ZeroStats(cfg.segments);
    rr.ground_truth = ZeroStats(cfg.segments);
    rr.matches = true;
    if (state.frames.empty()) {
      Log(now, "rsu closes round " + std::to_string(r) + " with no reports");
      return;
    }

    // Attribution of unparseable frames uses the simulator's delivery
    // record; the RSU itself only sees bytes.
    std::vector<Bytes> frames;
    for (const Pending& p : state.frames) frames.push_back(p.frame);
    for (const Pending& p : state.frames) {
      try {
        if (trpm) {
          codec.DecodeTrpmReport(p.frame);
        } else {
          codec.DecodeReport(p.frame);
        }
      } catch (const DecodeError&) {
        rr.rejected.push_back({p.sender, "malformed"});
      }
    }

    std::vector<Bytes> accepted;
    std::vector<entities::Rejection> rejected;
    Bytes agg_frame;
    try {
      if (trpm) {
        entities::TrpmOutcome out =
            rsu.ReceiveTrpmReports(frames, now, &rr.rsu_ops);
        accepted = out.accepted;
        rejected = out.rejected;
        rr.batch_failed = out.batch_failed;
        agg_frame = codec.Encode(out.report);
        rr.sp_ciphertexts = out.report.c.size();
      } else {
        entities::AggregationOutcome out =
            rsu.ReceiveReports(frames, now, &rr.rsu_ops);
        accepted = out.accepted;
        rejected = out.rejected;
        rr.batch_failed = out.batch_failed;
        agg_frame = codec.Encode(out.report);
        rr.sp_ciphertexts = 2;
      }
    } catch (const AggregationError& e) {
      Log(now, std::string("rsu cannot aggregate round ") +
                   std::to_string(r) + ": " + e.what());
      for (const Pending& p : state.frames) {
        bool listed = std::any_of(
            rr.rejected.begin(), rr.rejected.end(),
            [&](const RejectRecord& x) { return x.vehicle == p.sender; });
        if (!listed) rr.rejected.push_back({p.sender, "no_valid_reports"});
      }
      return;
    }
    for (const entities::Rejection& x : rejected) {
      if (x.reason == entities::RejectReason::kMalformed) continue;
      auto it = pid_owner.find(x.pid);
      rr.rejected.push_back({it == pid_owner.end() ? "" : it->second,
                             entities::RejectReasonName(x.reason)});
    }

    std::vector<uint64_t> counts(cfg.segments, 0), sums(cfg.segments, 0);
    for (const Bytes& pid : accepted) {
      accepted_pids[r].insert(pid);
      rr.accepted.push_back(pid_owner.at(pid));
      const entities::SegmentVectors& t = pid_truth.at(pid);
      for (size_t i = 0; i < cfg.segments; ++i) {
        counts[i] += t.flags[i];
        sums[i] += t.speeds[i];
      }
    }
    rr.ground_truth = entities::MakeStats(counts, sums);
    rr.aggregated = true;
    rr.reports = static_cast<uint32_t>(accepted.size());
    rr.matches = false;  // settled when the SP reads the aggregate

    result_.rsu_to_sp.messages += 1;
    result_.rsu_to_sp.bytes += agg_frame.size();
    rr.aggregate_payload_bits = wire::PayloadBits(wire::ParseFrame(agg_frame));
    result_.rsu_to_sp.payload_bits += rr.aggregate_payload_bits;
    Log(now, "rsu aggregates round " + std::to_string(r) + " N=" +
                 std::to_string(accepted.size()) + " rejected=" +
                 std::to_string(rr.rejected.size()));

    int64_t arrive =
        now + Latency(s.seed, "wired/" + std::to_string(r), kWiredMin,
                      kWiredMax);
    Schedule(arrive, kSpEntity, [&, r, agg_frame] {
      RoundResult& round = result_.rounds[r];
      round.sp_messages += 1;
      try {
        SegmentStats stats;
        int64_t ts = 0;
        if (trpm) {
          entities::TrpmAggregate agg = codec.DecodeTrpmAggregate(agg_frame);
          stats = sp.ReadTrpm(agg, &round.sp_ops);
          ts = agg.ts;
        } else {
          entities::AggregatedReport agg = codec.DecodeAggregate(agg_frame);
          stats = sp.Read(agg, &round.sp_ops);
          ts = agg.ts;
        }
        round.stats = stats;
        round.bulletin = sp.Publish(stats, s.rsu_id, ts);
        round.matches = round.stats == round.ground_truth;
        Log(current_time_, "sp publishes round " + std::to_string(r) +
                               (round.matches ? " (matches ground truth)"
                                              : " (MISMATCH)"));
      } catch (const Error& e) {
        round.matches = false;
        Log(current_time_, std::string("sp rejects aggregate: ") + e.what());
      }
    });
  };

  auto broadcast = [&](int64_t t, size_t round, const Bytes& frame,
                       std::optional<size_t> action, const std::string& tag) {
    result_.rsu_to_vehicles.messages += 1;
    result_.rsu_to_vehicles.bytes += frame.size();
    result_.rsu_to_vehicles.payload_bits +=
        wire::PayloadBits(wire::ParseFrame(frame));
    for (size_t k = 0; k < vehicles.size(); ++k) {
      int64_t lat = Latency(s.seed,
                            "down/" + tag + "/" + std::to_string(round) + "/" +
                                s.vehicles[k].id,
                            kDownMin, kDownMax);
      Schedule(t + lat, kVehicleEntityBase + k, [&, k, round, frame, action] {
        deliver_request(k, round, frame, action);
      });
    }
  };

  for (size_t r = 0; r < s.requests.size(); ++r) {
    const RequestSpec spec = s.requests[r];
    result_.rounds[r].round = r;
    result_.rounds[r].request_ts = spec.time_ms;
    result_.rounds[r].time_range_ms = spec.time_range_ms;
    Schedule(spec.time_ms, kRsuEntity, [&, r, spec] {
      entities::SpeedRequest req = rsu.MakeRequest(
          spec.time_ms, spec.time_range_ms, &result_.rsu_request_ops);
      rounds[r].request_frame = codec.Encode(req);
      rounds[r].open = true;
      Log(current_time_, "rsu broadcasts request round " + std::to_string(r));
      broadcast(current_time_, r, rounds[r].request_frame, std::nullopt,
                "rsu");
    });
    Schedule(spec.time_ms + s.collection_window_ms, kRsuEntity,
             [&, r] { close_round(r); });
  }

  for (size_t i = 0; i < s.adversary.size(); ++i) {
    const AdversaryAction& a = s.adversary[i];
    if (a.kind == AdversaryKind::kReplay && a.target == "request") {
      const int64_t t = s.requests[a.round].time_ms + a.delay_ms;
      Schedule(t, kAdversaryEntity, [&, i, a] {
        Log(current_time_, "adversary replays request of round " +
                               std::to_string(a.round));
        broadcast(current_time_, a.round, rounds[a.round].request_frame, i,
                  "replay" + std::to_string(i));
      });
    } else if (a.kind == AdversaryKind::kForge) {
      const int64_t t = s.requests[a.round].time_ms + 1;
      Schedule(t, kAdversaryEntity, [&, i, a] {
        Rng rng(Rng::DeriveSeed(s.seed, "forge/" + std::to_string(i)));
        sig::KeyPair fake = sig::KeyGen(codec.group(), rng);
        entities::SpeedRequest req{a.target.empty() ? s.rsu_id : a.target,
                                   current_time_,
                                   s.requests[a.round].time_range_ms,
                                   {}};
        req.sigma = sig::Sign(codec.group(), fake.sk, codec.SignedBytes(req));
        Log(current_time_, "adversary broadcasts forged request as " +
                               req.rsu_id);
        broadcast(current_time_, a.round, codec.Encode(req), i,
                  "forge" + std::to_string(i));
      });
    }
  }

  while (!queue_.empty()) {
    Event e = queue_.top();
    queue_.pop();
    current_time_ = e.time;
    e.action();
  }

  // Adversary outcome records.
  for (size_t i = 0; i < s.adversary.size(); ++i) {
    const AdversaryAction& a = s.adversary[i];
    const Tally& t = tallies[i];
    AdversaryRecord rec;
    rec.index = i;
    rec.kind = AdversaryKindName(a.kind);
    auto times_accepted = [&](size_t r) {
      return t.pid ? accepted_pids[r].count(*t.pid) : 0;
    };
    switch (a.kind) {
      case AdversaryKind::kTamper: {
        rec.detail = "round " + std::to_string(a.round) + " vehicle " +
                     a.vehicle + " field " + a.target;
        bool got_in = times_accepted(a.round) > 0;
        rec.defended = !got_in;
        rec.outcome = got_in ? "tampered report accepted"
                             : "tampered report rejected";
        break;
      }
      case AdversaryKind::kReplay:
        if (a.target == "request") {
          rec.detail = "request of round " + std::to_string(a.round) +
                       " after " + std::to_string(a.delay_ms) + " ms";
          rec.defended = t.answered == 0;
          rec.outcome = std::to_string(t.rejected) + " rejected, " +
                        std::to_string(t.ignored) + " ignored, " +
                        std::to_string(t.answered) + " answered";
        } else {
          rec.detail = "report of " + a.vehicle + " round " +
                       std::to_string(a.round) + " after " +
                       std::to_string(a.delay_ms) + " ms";
          if (t.dropped || !t.pid) {
            rec.defended = true;
            rec.outcome = "dropped outside collection window";
          } else {
            size_t r = *t.absorbed_round;
            size_t times = times_accepted(r);
            // In its own round the honest copy is expected once; anywhere
            // else it must not appear at all.
            size_t allowed = r == a.round ? 1 : 0;
            rec.defended = times <= allowed;
            rec.outcome = rec.defended
                              ? "replayed report rejected in round " +
                                    std::to_string(r)
                              : "replayed report accepted in round " +
                                    std::to_string(r);
          }
        }
        break;
      case AdversaryKind::kForge:
        rec.detail = "forged request in round " + std::to_string(a.round);
        rec.defended = t.answered == 0;
        rec.outcome = std::to_string(t.rejected) + " of " +
                      std::to_string(t.delivered) + " vehicles rejected";
        break;
      case AdversaryKind::kEavesdrop: {
        // Only what honest vehicles put on the air counts as leakage.
        size_t signal = 0;
        size_t honest = 0;
        for (const Observation& o : transcript_) {
          if (o.altered) continue;
          ++honest;
          signal += PlaintextSignalFields(codec, o.frame);
        }
        rec.detail = std::to_string(honest) + " honest reports observed";
        rec.defended = signal == 0;
        rec.outcome = std::to_string(signal) +
                      " plaintext speed or location fields";
        break;
      }
      case AdversaryKind::kLink: {
        double acc = LinkEncrypted(codec, transcript_, a.round);
        size_t n = 0;
        size_t signal = 0;
        for (const Observation& o : transcript_) {
          if (o.altered) continue;
          if (o.round != a.round && o.round != a.round + 1) continue;
          if (o.round == a.round) ++n;
          signal += PlaintextSignalFields(codec, o.frame);
        }
        rec.detail = "rounds " + std::to_string(a.round) + " and " +
                     std::to_string(a.round + 1) + ", " + std::to_string(n) +
                     " vehicles";
        rec.linking_accuracy = acc;
        // One run is too small to judge the accuracy against chance; what
        // must hold is that no report offers a speed or location to link
        // on, leaving only arrival order.
        rec.defended = signal == 0;
        rec.outcome = signal == 0 ? "no plaintext signal, arrival-order "
                                    "fallback"
                                  : std::to_string(signal) +
                                        " plaintext fields usable for linking";
        break;
      }
    }
    result_.adversary.push_back(std::move(rec));
  }
  return result_;
}

ScenarioResult RunScenario(const Scenario& s) { return Simulator(s).Run(); }

ScenarioResult RunTrpmScenario(const Scenario& s) {
  Scenario copy = s;
  copy.scheme = Scheme::kTrpm;
  return Simulator(std::move(copy)).Run();
}

// ---- time-link attack ----

std::pair<std::vector<PlainReport>, std::vector<PlainReport>>
StrawmanTranscript(const Scenario& s, size_t first_round) {
  if (first_round + 1 >= s.requests.size()) {
    throw InvalidArgumentError("strawman transcript needs two rounds");
  }
  std::vector<PlainReport> out[2];
  for (size_t k = 0; k < 2; ++k) {
    const size_t r = first_round + k;
    const int64_t t = s.requests[r].time_ms;
    for (const VehicleTrace& v : s.vehicles) {
      entities::TrajectoryLog log = LogAt(v, t);
      if (log.entries.empty()) continue;
      const Visit* last = nullptr;
      for (const Visit& visit : v.visits) {
        if (visit.exit_ms <= t && (!last || visit.exit_ms > last->exit_ms)) {
          last = &visit;
        }
      }
      Rng rng(Rng::DeriveSeed(s.seed, "strawman/" + std::to_string(r) + "/" +
                                          v.id));
      Bytes pid(8);
      rng.Fill(pid);
      out[k].push_back(
          {ToHex(pid), last->speed, last->segment, last->exit_ms, v.id});
    }
    // The transcript order carries no information.
    std::sort(out[k].begin(), out[k].end(),
              [](const PlainReport& a, const PlainReport& b) {
                return a.pid < b.pid;
              });
  }
  return {std::move(out[0]), std::move(out[1])};
}

double LinkStrawman(const std::vector<PlainReport>& first,
                    const std::vector<PlainReport>& second,
                    double segment_length_m, uint32_t speed_scale) {
  if (first.empty()) return 0.0;
  size_t correct = 0;
  for (const PlainReport& a : first) {
    if (a.speed == 0) continue;
    const double kmh = static_cast<double>(a.speed) / speed_scale;
    const PlainReport* best = nullptr;
    double best_err = 0;
    for (const PlainReport& b : second) {
      if (b.location <= a.location || b.time_ms <= a.time_ms) continue;
      double distance = (b.location - a.location) * segment_length_m;
      double estimated_ms = distance * 3600.0 / kmh;
      double actual_ms = static_cast<double>(b.time_ms - a.time_ms);
      double err = std::abs(estimated_ms - actual_ms);
      if (!best || err < best_err) {
        best = &b;
        best_err = err;
      }
    }
    if (best && best->sender == a.sender) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(first.size());
}

size_t PlaintextSignalFields(const wire::Codec& codec, BytesView frame) {
  try {
    wire::Frame f = wire::ParseFrame(frame);
    if (f.tag == wire::Tag::kSpeedReport) {
      codec.DecodeReport(frame);
      return 0;
    }
    if (f.tag == wire::Tag::kTrpmReport) {
      codec.DecodeTrpmReport(frame);
      return 0;
    }
    return f.fields.size();
  } catch (const DecodeError&) {
    // Not a well-formed protocol report: count it as one opaque blob the
    // attacker could try to read.
    return 1;
  }
}

double LinkEncrypted(const wire::Codec& codec,
                     const std::vector<Observation>& transcript,
                     size_t first_round) {
  std::vector<const Observation*> first, second;
  for (const Observation& o : transcript) {
    if (o.round == first_round) first.push_back(&o);
    if (o.round == first_round + 1) second.push_back(&o);
  }
  size_t victims = 0;
  for (const Observation* o : first) {
    if (o->sender != "adversary") ++victims;
  }
  if (victims == 0) return 0.0;
  // Reports carry no speed or location to project with, so the attacker
  // pairs them by arrival rank.
  (void)codec;
  auto by_arrival = [](const Observation* a, const Observation* b) {
    return std::tie(a->arrival_ms, a->frame) < std::tie(b->arrival_ms, b->frame);
  };
  std::sort(first.begin(), first.end(), by_arrival);
  std::sort(second.begin(), second.end(), by_arrival);
  size_t correct = 0;
  for (size_t i = 0; i < first.size() && i < second.size(); ++i) {
    if (first[i]->sender != "adversary" &&
        first[i]->sender == second[i]->sender) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(victims);
}

// ---- generators ----

Scenario RandomScenario(uint64_t seed, const RandomScenarioOptions& o) {
  Rng rng = Rng(seed).Derive("random-scenario");
  Scenario s;
  s.seed = seed;
  s.config.kappa = o.kappa;
  s.config.kappa1 = o.kappa1;
  s.config.segments = 1 + rng.Below(o.max_segments);
  s.config.max_vehicles = o.max_vehicles;
  s.config.max_speed = o.max_speed;
  s.config.pseudonyms_per_vehicle = 2;
  const size_t n = rng.Below(o.max_vehicles + 1);
  for (size_t k = 0; k < n; ++k) {
    VehicleTrace v;
    v.id = "veh-" + std::to_string(k);
    int64_t t = static_cast<int64_t>(rng.Below(5000));
    const size_t visits = rng.Below(s.config.segments + 3);
    for (size_t i = 0; i < visits; ++i) {
      Visit visit;
      visit.segment = rng.Below(s.config.segments);
      visit.entry_ms = t;
      visit.exit_ms = t + 1000 + static_cast<int64_t>(rng.Below(9000));
      visit.speed = rng.Below(o.max_speed + 1);
      v.visits.push_back(visit);
      t = visit.exit_ms + static_cast<int64_t>(rng.Below(2000));
    }
    s.vehicles.push_back(std::move(v));
  }
  for (size_t r = 0; r < o.rounds; ++r) {
    s.requests.push_back({60000 + static_cast<int64_t>(r) * 30000,
                          5000 + static_cast<int64_t>(rng.Below(55000))});
  }
  return s;
}

Scenario LinkScenario(uint64_t seed, size_t vehicles, int kappa, int kappa1) {
  if (vehicles < 1) throw InvalidArgumentError("need at least one vehicle");
  Rng rng = Rng(seed).Derive("link-scenario");
  Scenario s;
  s.seed = seed;
  s.config.kappa = kappa;
  s.config.kappa1 = kappa1;
  s.config.segments = 10;
  s.config.max_vehicles = std::max<uint64_t>(vehicles, 1);
  s.config.max_speed = 120;
  s.config.pseudonyms_per_vehicle = 4;
  s.requests = {{100000, 60000}, {220000, 60000}};
  constexpr double kTolMs = 50.0;

  for (int attempt = 0; attempt < 100000; ++attempt) {
    s.vehicles.clear();
    std::set<uint64_t> speeds;
    while (speeds.size() < vehicles) speeds.insert(40 + rng.Below(81));
    std::vector<uint64_t> order(speeds.begin(), speeds.end());
    // Shuffle so vehicle index carries no speed information.
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.Below(i)]);
    }
    for (size_t k = 0; k < vehicles; ++k) {
      VehicleTrace v;
      v.id = "veh-" + std::to_string(k);
      const uint64_t speed = order[k];
      const int64_t start = static_cast<int64_t>(rng.Below(30000));
      const int64_t dwell = static_cast<int64_t>(
          std::llround(kLinkSegmentLengthM * 3600.0 / speed));
      for (size_t i = 0; i < s.config.segments; ++i) {
        int64_t entry = start + static_cast<int64_t>(i) * dwell;
        v.visits.push_back({i, entry, entry + dwell, speed});
      }
      s.vehicles.push_back(std::move(v));
    }
    // Reject traffic where one vehicle's projected passing time at a
    // reported segment lands within tolerance of another vehicle's actual
    // passing time there: such ties are ambiguous for any observer.
    auto [first, second] = StrawmanTranscript(s, 0);
    bool ambiguous = first.size() != vehicles || second.size() != vehicles;
    for (const PlainReport& a : first) {
      for (const PlainReport& b : second) {
        if (ambiguous) break;
        if (a.sender == b.sender) {
          ambiguous = b.location <= a.location;
          continue;
        }
        if (b.location <= a.location) continue;
        double projected =
            (b.location - a.location) * kLinkSegmentLengthM * 3600.0 / a.speed;
        double actual = static_cast<double>(b.time_ms - a.time_ms);
        if (std::abs(projected - actual) < kTolMs) ambiguous = true;
      }
    }
    if (!ambiguous) return s;
  }
  throw InvalidArgumentError("could not generate an unambiguous link scenario");
}

LinkOutcome RunLinkAttack(const Scenario& s) {
  LinkOutcome out;
  auto [first, second] = StrawmanTranscript(s, 0);
  out.strawman_accuracy = LinkStrawman(first, second, kLinkSegmentLengthM,
                                       s.config.speed_scale);
  Simulator sim(s);
  sim.Run();
  const wire::Codec& codec = *sim.codec();
  for (const Observation& o : sim.transcript()) {
    out.plaintext_signal_fields += PlaintextSignalFields(codec, o.frame);
    if (o.round == 0 && o.sender != "adversary") ++out.linked_vehicles;
  }
  out.encrypted_accuracy = LinkEncrypted(codec, sim.transcript(), 0);
  return out;
}

}  // namespace pptm::simnet
