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

#include "pptm/bench.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "pptm/entities.h"

namespace pptm::bench {

namespace {

using Clock = std::chrono::steady_clock;

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t k = v.size() / 2;
  return v.size() % 2 == 1 ? v[k] : (v[k - 1] + v[k]) / 2.0;
}

template <typename Fn>
double TimeMs(Fn&& fn) {
  auto t0 = Clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

OpCounts Project(const OpCounter& c) {
  return OpCounts{c.exp_n2, c.pairing, c.mul_g};
}

double Predict(const OpCounts& c, const UnitCosts& u) {
  return static_cast<double>(c.exp_n2) * u.exp_ms +
         static_cast<double>(c.pairing) * u.pairing_ms +
         static_cast<double>(c.mul_g) * u.mul_ms;
}

// Runs one scheme at one M for every N, appending vehicle, RSU and SP rows.
class SweepPoint {
 public:
  SweepPoint(const BenchSpec& spec, size_t m, const UnitCosts& unit)
      : spec_(spec), m_(m), unit_(unit) {
    max_n_ = *std::max_element(spec.reports.begin(), spec.reports.end());
    config_.kappa = spec.kappa;
    config_.kappa1 = spec.kappa1;
    config_.segments = m;
    config_.max_vehicles = max_n_;
    config_.max_speed = spec.max_speed;
    config_.pseudonyms_per_vehicle = 1;
  }

  void Run(std::vector<CostRow>& rows) {
    const uint64_t seed =
        Rng::DeriveSeed(spec_.seed, "bench/M=" + std::to_string(m_));
    entities::TrustAuthority ta(config_, seed);
    entities::RoadsideUnit rsu(ta.RegisterRsu("rsu-bench"));
    entities::ServiceProvider sp(ta.ServiceProviderMaterial());
    const wire::Codec& codec = rsu.codec();

    // Every vehicle drove through all M segments within the time range.
    Rng rng(Rng::DeriveSeed(seed, "logs"));
    std::vector<entities::TrajectoryLog> logs(max_n_);
    for (auto& log : logs) {
      for (size_t i = 0; i < m_; ++i) {
        log.entries.push_back({i, 1000, rng.Below(spec_.max_speed + 1)});
      }
    }
    const int64_t now = 10'000;
    const entities::SpeedRequest req =
        rsu.MakeRequest(now, static_cast<int64_t>(m_) * 1000);

    std::vector<entities::Vehicle> vehicles;
    for (size_t j = 0; j < max_n_; ++j) {
      std::string id = "veh-" + std::to_string(j);
      vehicles.emplace_back(id, ta.RegisterVehicle(id, "rsu-bench"),
                            Rng::DeriveSeed(seed, id));
    }
    auto fresh = [&](entities::Vehicle& v) {
      if (v.NeedsRegistration()) {
        v.Reregister(ta.RegisterVehicle(v.identity(), "rsu-bench"));
      }
    };

    for (Scheme scheme : spec_.schemes) {
      const bool trpm = scheme == Scheme::kTrpm;
      std::vector<entities::SpeedReport> reports;
      std::vector<entities::TrpmReport> trpm_reports;
      OpCounter vehicle_ops;
      uint64_t vehicle_bytes = 0;
      for (size_t j = 0; j < max_n_; ++j) {
        fresh(vehicles[j]);
        OpCounter ops;
        wire::Frame frame;
        if (trpm) {
          trpm_reports.push_back(vehicles[j].BuildTrpmReport(logs[j], req, &ops));
          frame = codec.ToFrame(trpm_reports.back());
        } else {
          reports.push_back(vehicles[j].BuildReport(logs[j], req, &ops));
          frame = codec.ToFrame(reports.back());
        }
        if (j == 0) {
          vehicle_ops = ops;
          vehicle_bytes = wire::PayloadBits(frame) / 8;
        }
      }
      if (spec_.reference_widths) {
        vehicle_bytes = wire::VehicleReportBits(wire::FieldWidths::Reference(),
                                                scheme, m_) /
                        8;
      }

      std::optional<double> vehicle_ms;
      if (!spec_.counters_only) {
        std::vector<double> samples;
        for (size_t r = 0; r < spec_.repetitions; ++r) {
          fresh(vehicles[0]);
          samples.push_back(TimeMs([&] {
            if (trpm) {
              vehicles[0].BuildTrpmReport(logs[0], req);
            } else {
              vehicles[0].BuildReport(logs[0], req);
            }
          }));
        }
        vehicle_ms = Median(samples);
      }

      for (size_t n : spec_.reports) {
        OpCounter rsu_ops, sp_ops;
        wire::Frame agg_frame;
        std::optional<double> rsu_ms, sp_ms;
        auto aggregate = [&](OpCounter* ops) {
          if (trpm) {
            return codec.ToFrame(
                rsu.VerifyAndAggregateTrpm(
                       std::span(trpm_reports.data(), n), now, ops)
                    .report);
          }
          return codec.ToFrame(
              rsu.VerifyAndAggregate(std::span(reports.data(), n), now, ops)
                  .report);
        };
        agg_frame = aggregate(&rsu_ops);
        const Bytes agg_bytes = wire::SerializeFrame(agg_frame);
        auto read = [&](OpCounter* ops) {
          if (trpm) {
            sp.ReadTrpm(codec.DecodeTrpmAggregate(agg_bytes), ops);
          } else {
            sp.Read(codec.DecodeAggregate(agg_bytes), ops);
          }
        };
        read(&sp_ops);
        if (!spec_.counters_only) {
          std::vector<double> a, b;
          for (size_t r = 0; r < spec_.repetitions; ++r) {
            a.push_back(TimeMs([&] { aggregate(nullptr); }));
            b.push_back(TimeMs([&] { read(nullptr); }));
          }
          rsu_ms = Median(a);
          sp_ms = Median(b);
        }
        uint64_t agg_payload = wire::PayloadBits(agg_frame) / 8;
        if (spec_.reference_widths) {
          agg_payload =
              wire::AggregateBits(wire::FieldWidths::Reference(), scheme, m_) / 8;
        }
        rows.push_back(Row(scheme, Role::kVehicle, n, vehicle_ops, vehicle_ms,
                           vehicle_bytes));
        rows.push_back(Row(scheme, Role::kRsu, n, rsu_ops, rsu_ms, agg_payload));
        rows.push_back(Row(scheme, Role::kSp, n, sp_ops, sp_ms, 0));
      }
    }
  }

 private:
  CostRow Row(Scheme scheme, Role role, size_t n, const OpCounter& ops,
              std::optional<double> ms, uint64_t bytes) const {
    CostRow row;
    row.scheme = scheme;
    row.role = role;
    row.m = m_;
    row.n = n;
    row.counts = Project(ops);
    row.predicted_ms = Predict(row.counts, unit_);
    row.measured_ms = ms;
    row.bytes = bytes;
    row.repetitions = spec_.counters_only ? 0 : spec_.repetitions;
    return row;
  }

  const BenchSpec& spec_;
  size_t m_;
  UnitCosts unit_;
  size_t max_n_ = 0;
  entities::SystemConfig config_;
};

}  // namespace

const char* SchemeName(Scheme s) {
  return s == Scheme::kPptm ? "PPTM" : "TRPM";
}

const char* RoleName(Role r) {
  switch (r) {
    case Role::kVehicle:
      return "vehicle";
    case Role::kRsu:
      return "RSU";
    case Role::kSp:
      return "SP";
  }
  return "unknown";
}

UnitCosts UnitCosts::Reference() {
  return UnitCosts{.exp_ms = 5.0, .pairing_ms = 2.0, .mul_ms = 2.0};
}

UnitCosts MeasureUnitCosts(int kappa, int kappa1, size_t samples,
                           uint64_t seed) {
  if (samples == 0) throw InvalidArgumentError("need at least one sample");
  Rng rng(seed);
  pairing::GroupParams gp =
      pairing::Setup(kappa, Rng::DeriveSeed(seed, "group"));
  paillier::Keypair kp = paillier::GenerateKeypair(kappa1, rng);
  std::vector<double> exp, pair, mul;
  for (size_t i = 0; i < samples; ++i) {
    mpz_class m = rng.Below(kp.pk.n);
    mpz_class k = rng.Below(gp.q);
    pairing::G1Point a = pairing::Mul(gp, gp.generator, k);
    exp.push_back(TimeMs([&] { paillier::Encrypt(kp.pk, m, rng); }));
    pair.push_back(TimeMs([&] { pairing::Pair(gp, a, gp.generator); }));
    mul.push_back(TimeMs([&] { pairing::Mul(gp, a, k); }));
  }
  return UnitCosts{Median(exp), Median(pair), Median(mul)};
}

OpCounts ExpectedCounts(Scheme scheme, Role role, size_t m, size_t n) {
  const uint64_t per_segment = scheme == Scheme::kPptm ? 2 : m;
  switch (role) {
    case Role::kVehicle:
      return OpCounts{per_segment, 0, 1};
    case Role::kRsu:
      return OpCounts{0, n + 1, 1};
    case Role::kSp:
      return OpCounts{per_segment, 2, 0};
  }
  return {};
}

void BenchSpec::Validate() const {
  if (segments.empty() || reports.empty() || schemes.empty()) {
    throw InvalidArgumentError("bench sweep needs M values, N values and a "
                               "scheme");
  }
  for (size_t m : segments) {
    if (m < 1) throw InvalidArgumentError("M values must be at least 1");
  }
  for (size_t n : reports) {
    if (n < 1) throw InvalidArgumentError("N values must be at least 1");
  }
  if (!counters_only && repetitions < 3) {
    throw InvalidArgumentError("wall-clock mode needs at least 3 repetitions");
  }
  if (max_speed < 1) throw InvalidArgumentError("V must be at least 1");
}

std::vector<size_t> BenchResult::Mismatches() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < rows.size(); ++i) {
    const CostRow& r = rows[i];
    if (r.counts != ExpectedCounts(r.scheme, r.role, r.m, r.n)) {
      out.push_back(i);
    }
  }
  return out;
}

std::string BenchResult::ToCsv() const {
  std::ostringstream out;
  out << "# schema=" << kCsvSchema
      << " mode=" << (counters_only ? "counters-only" : "wall-clock");
  if (!counters_only) out << " repetitions=" << repetitions;
  out << " unit_ms=exp:" << Fixed(unit_costs.exp_ms)
      << ",pairing:" << Fixed(unit_costs.pairing_ms)
      << ",mul:" << Fixed(unit_costs.mul_ms) << "\n";
  out << "scheme,role,M,N,count_exp_n2,count_pairing,count_mul_g,"
         "predicted_ms,measured_ms,bytes\n";
  for (const CostRow& r : rows) {
    out << SchemeName(r.scheme) << "," << RoleName(r.role) << "," << r.m
        << "," << r.n << "," << r.counts.exp_n2 << "," << r.counts.pairing
        << "," << r.counts.mul_g << "," << Fixed(r.predicted_ms) << ","
        << (r.measured_ms ? Fixed(*r.measured_ms) : "") << "," << r.bytes
        << "\n";
  }
  return out.str();
}

BenchResult RunBench(const BenchSpec& spec) {
  spec.Validate();
  BenchResult result;
  result.counters_only = spec.counters_only;
  result.repetitions = spec.counters_only ? 0 : spec.repetitions;
  result.unit_costs = spec.counters_only
                          ? UnitCosts::Reference()
                          : MeasureUnitCosts(spec.kappa, spec.kappa1, 15,
                                             spec.seed);
  for (size_t m : spec.segments) {
    SweepPoint(spec, m, result.unit_costs).Run(result.rows);
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const CostRow& a, const CostRow& b) {
                     return std::tuple(a.scheme, a.role, a.m, a.n) <
                            std::tuple(b.scheme, b.role, b.m, b.n);
                   });
  return result;
}

BenchResult FromScenario(const simnet::Scenario& s,
                         const simnet::ScenarioResult& r) {
  BenchResult out;
  out.unit_costs = UnitCosts::Reference();
  auto row = [&](Role role, size_t n, OpCounts counts, uint64_t bits) {
    CostRow c;
    c.scheme = r.scheme;
    c.role = role;
    c.m = s.config.segments;
    c.n = n;
    c.counts = counts;
    c.predicted_ms = Predict(counts, out.unit_costs);
    c.bytes = bits / 8;
    out.rows.push_back(c);
  };
  for (const simnet::RoundResult& round : r.rounds) {
    if (!round.aggregated) continue;
    OpCounts v = Project(round.vehicle_ops);
    if (round.reports_built > 0) {
      v.exp_n2 /= round.reports_built;
      v.pairing /= round.reports_built;
      v.mul_g /= round.reports_built;
    }
    row(Role::kVehicle, round.reports, v, round.report_payload_bits);
    row(Role::kRsu, round.reports, Project(round.rsu_ops),
        round.aggregate_payload_bits);
    row(Role::kSp, round.reports, Project(round.sp_ops), 0);
  }
  return out;
}

}  // namespace pptm::bench
