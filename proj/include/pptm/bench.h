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

#ifndef PPTM_BENCH_H_
#define PPTM_BENCH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pptm/common.h"
#include "pptm/messages.h"
#include "pptm/simnet.h"
#include "pptm/wire.h"

// Cost sweeps over (scheme, role, M, N), reporting operation counts from
// real protocol runs alongside a unit-cost time model.
namespace pptm::bench {

using entities::Scheme;

enum class Role { kVehicle, kRsu, kSp };

const char* SchemeName(Scheme s);
const char* RoleName(Role r);

// Milliseconds per operation.
struct UnitCosts {
  double exp_ms = 0;      // C_n: exponentiation in Z_{n^2}
  double pairing_ms = 0;  // C_e
  double mul_ms = 0;      // C_m: scalar multiplication in G1

  // 5 ms, 2 ms and 2 ms: the reference hardware figures.
  static UnitCosts Reference();
};

// Median per-operation times at the given parameters.
UnitCosts MeasureUnitCosts(int kappa, int kappa1, size_t samples,
                           uint64_t seed);

struct OpCounts {
  uint64_t exp_n2 = 0;
  uint64_t pairing = 0;
  uint64_t mul_g = 0;
  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

// Counts this implementation performs per role. Vehicles: 2 (PPTM) or M
// (TRPM) encryptions and one signature. RSU: batch verification of N
// reports plus one signature. SP: one signature check (two pairings) and 2
// or M decryptions.
OpCounts ExpectedCounts(Scheme scheme, Role role, size_t m, size_t n);

struct BenchSpec {
  std::vector<size_t> segments;  // M values
  std::vector<size_t> reports;   // N values
  std::vector<Scheme> schemes{Scheme::kPptm, Scheme::kTrpm};
  int kappa = 80;
  int kappa1 = 160;
  uint64_t max_speed = 10;  // V; Q is the largest N
  size_t repetitions = 3;
  bool counters_only = true;
  // Report bytes from the closed forms at the reference field widths
  // instead of the serialized widths of the chosen parameters.
  bool reference_widths = false;
  uint64_t seed = 1;

  // Throws InvalidArgumentError.
  void Validate() const;
};

struct CostRow {
  Scheme scheme = Scheme::kPptm;
  Role role = Role::kVehicle;
  size_t m = 0;
  size_t n = 0;
  OpCounts counts;
  double predicted_ms = 0;
  std::optional<double> measured_ms;  // wall-clock mode only
  uint64_t bytes = 0;                 // payload the role sends
  size_t repetitions = 0;
};

struct BenchResult {
  std::vector<CostRow> rows;
  UnitCosts unit_costs;
  bool counters_only = true;
  size_t repetitions = 0;

  // Rows whose counts differ from ExpectedCounts.
  std::vector<size_t> Mismatches() const;
  std::string ToCsv() const;
};

BenchResult RunBench(const BenchSpec& spec);

// Cost rows observed in a simulated run: one vehicle, RSU and SP row per
// aggregated round, with M from the scenario and N the accepted reports.
// Vehicle counts are per report. Unit costs are the reference figures.
BenchResult FromScenario(const simnet::Scenario& s,
                         const simnet::ScenarioResult& r);

inline constexpr char kCsvSchema[] = "pptm-cost-v1";

}  // namespace pptm::bench

#endif  // PPTM_BENCH_H_
