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

// Command-line front end: key generation, scenario runs and cost sweeps.
//
// Exit codes: 0 success, 1 invariant failure, 2 input error.

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pptm/bench.h"
#include "pptm/entities.h"
#include "pptm/scenario.h"
#include "pptm/serialize.h"
#include "pptm/simnet.h"

namespace {

namespace fs = std::filesystem;
using namespace pptm;

constexpr int kOk = 0;
constexpr int kInvariantFailure = 1;
constexpr int kInputError = 2;

struct Globals {
  std::optional<uint64_t> seed;
  std::string config_path;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgumentError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgumentError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw InvalidArgumentError("write failed: " + path.string());
}

std::optional<entities::SystemConfig> LoadConfig(const Globals& g) {
  if (g.config_path.empty()) return std::nullopt;
  entities::SystemConfig c = serialize::ConfigFromJson(ReadFile(g.config_path));
  c.Validate();
  return c;
}

// "1..30", "5" or a comma-separated mix of both.
std::vector<size_t> ParseRange(const std::string& text, const char* what) {
  auto number = [&](std::string_view s) {
    size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw InvalidArgumentError(std::string("bad ") + what + " '" +
                                 std::string(s) + "'");
    }
    return v;
  };
  std::vector<size_t> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    size_t comma = rest.find(',');
    std::string_view part = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? "" : rest.substr(comma + 1);
    size_t dots = part.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(number(part));
      continue;
    }
    size_t lo = number(part.substr(0, dots));
    size_t hi = number(part.substr(dots + 2));
    if (hi < lo) {
      throw InvalidArgumentError(std::string("empty ") + what + " range");
    }
    for (size_t v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw InvalidArgumentError(std::string("no ") + what);
  return out;
}

// ---- keygen ----

struct KeygenArgs {
  std::string out_dir;
  std::vector<std::string> rsus{"rsu-0"};
  std::vector<std::string> vehicles{"veh-0"};
};

void CheckFileId(const std::string& id) {
  if (id.empty() || id.find_first_of("/\\") != std::string::npos ||
      id == "." || id == "..") {
    throw InvalidArgumentError("identifier '" + id +
                               "' cannot be used as a file name");
  }
}

int Keygen(const Globals& g, const KeygenArgs& a) {
  entities::SystemConfig config =
      LoadConfig(g).value_or(entities::SystemConfig{});
  config.Validate();
  for (const auto& id : a.rsus) CheckFileId(id);
  for (const auto& id : a.vehicles) CheckFileId(id);

  entities::TrustAuthority ta(config, g.seed.value_or(0));
  fs::path dir(a.out_dir);
  fs::create_directories(dir);
  WriteFile(dir / "config.json", serialize::ToJson(config) + "\n");
  for (const auto& id : a.rsus) {
    WriteFile(dir / ("rsu-" + id + ".json"),
              serialize::ToJson(ta.RegisterRsu(id)) + "\n");
  }
  // Vehicles register with the first RSU.
  for (const auto& id : a.vehicles) {
    WriteFile(dir / ("vehicle-" + id + ".json"),
              serialize::ToJson(ta.RegisterVehicle(id, a.rsus.front())) +
                  "\n");
  }
  WriteFile(dir / "sp.json",
            serialize::ToJson(ta.ServiceProviderMaterial()) + "\n");
  std::cout << "wrote " << (a.rsus.size() + a.vehicles.size() + 2)
            << " files to " << dir.string() << "\n";
  return kOk;
}

// ---- run ----

struct RunArgs {
  std::string scenario_path;
  std::string csv_path;
  std::string json_path;
};

std::string Avg(const std::optional<uint64_t>& v) {
  return v ? std::to_string(*v) : "-";
}

void PrintRound(const simnet::RoundResult& r) {
  std::printf("round %zu  ts=%lld  TR=%lld ms  N=%u  rejected=%zu%s\n",
              r.round, static_cast<long long>(r.request_ts),
              static_cast<long long>(r.time_range_ms), r.reports,
              r.rejected.size(), r.batch_failed ? "  (batch failed)" : "");
  for (const auto& rej : r.rejected) {
    std::printf("  rejected %s: %s\n",
                rej.vehicle.empty() ? "?" : rej.vehicle.c_str(),
                rej.reason.c_str());
  }
  if (!r.aggregated) {
    std::printf("  no aggregate\n");
    return;
  }
  std::printf("  %-8s %8s %10s %12s %10s\n", "segment", "count", "avg_speed",
              "truth_count", "truth_avg");
  for (size_t i = 0; i < r.stats.counts.size(); ++i) {
    std::printf("  %-8zu %8llu %10s %12llu %10s\n", i,
                static_cast<unsigned long long>(r.stats.counts[i]),
                Avg(r.stats.averages[i]).c_str(),
                static_cast<unsigned long long>(r.ground_truth.counts[i]),
                Avg(r.ground_truth.averages[i]).c_str());
  }
  std::printf("  %s\n", r.matches ? "matches ground truth" : "MISMATCH");
}

int Run(const Globals& g, const RunArgs& a) {
  simnet::Scenario base;
  if (auto c = LoadConfig(g)) base.config = *c;
  simnet::Scenario s = scenario::LoadFile(a.scenario_path, base);
  if (g.seed) s.seed = *g.seed;
  simnet::Precheck(s);

  simnet::ScenarioResult result = simnet::RunScenario(s);
  std::printf("scenario %s  scheme=%s  seed=%llu  M=%zu  Q=%llu  V=%llu\n",
              a.scenario_path.c_str(), bench::SchemeName(s.scheme),
              static_cast<unsigned long long>(s.seed), s.config.segments,
              static_cast<unsigned long long>(s.config.max_vehicles),
              static_cast<unsigned long long>(s.config.max_speed));
  for (const auto& r : result.rounds) PrintRound(r);

  if (!result.adversary.empty()) std::printf("adversary\n");
  for (const auto& adv : result.adversary) {
    std::printf("  [%zu] %s %s -> %s (%s)", adv.index, adv.kind.c_str(),
                adv.detail.c_str(), adv.outcome.c_str(),
                adv.defended ? "defended" : "NOT DEFENDED");
    if (adv.linking_accuracy) {
      std::printf("  linking accuracy %.3f", *adv.linking_accuracy);
    }
    std::printf("\n");
  }

  bool ok = result.AllRoundsMatch() && result.AllAttacksDefended();
  // Without an adversary both schemes must publish the same statistics.
  if (s.adversary.empty()) {
    simnet::Scenario other = s;
    other.scheme = s.scheme == simnet::Scheme::kPptm ? simnet::Scheme::kTrpm
                                                     : simnet::Scheme::kPptm;
    simnet::ScenarioResult cross = simnet::RunScenario(other);
    bool same = cross.rounds.size() == result.rounds.size();
    for (size_t i = 0; same && i < cross.rounds.size(); ++i) {
      same = cross.rounds[i].stats == result.rounds[i].stats;
    }
    std::printf("cross-check against %s: %s\n",
                bench::SchemeName(other.scheme), same ? "same" : "DIFFERENT");
    ok = ok && same;
  }
  std::vector<std::string> missed = simnet::CheckExpectations(s, result);
  if (!s.expected.empty()) {
    std::printf("expectations: %zu/%zu hold\n",
                s.expected.size() - missed.size(), s.expected.size());
  }
  for (const auto& m : missed) std::printf("  %s\n", m.c_str());
  ok = ok && missed.empty();
  std::printf("oracle: %s\n", ok ? "PASS" : "FAIL");

  std::string csv = bench::FromScenario(s, result).ToCsv();
  if (a.csv_path.empty()) {
    std::printf("\n%s", csv.c_str());
  } else {
    WriteFile(a.csv_path, csv);
  }
  if (!a.json_path.empty()) WriteFile(a.json_path, result.ToJson() + "\n");
  return ok ? kOk : kInvariantFailure;
}

// ---- bench ----

struct BenchArgs {
  std::string segments = "1..30";
  std::string reports = "1..50";
  std::string schemes = "pptm,trpm";
  std::optional<int> kappa;
  std::optional<int> kappa1;
  std::optional<uint64_t> max_speed;
  size_t repetitions = 3;
  bool counters_only = false;
  std::string widths = "serialized";
  std::string out_path;
};

int Bench(const Globals& g, const BenchArgs& a) {
  bench::BenchSpec spec;
  if (auto c = LoadConfig(g)) {
    spec.kappa = c->kappa;
    spec.kappa1 = c->kappa1;
    spec.max_speed = c->max_speed;
  }
  if (a.kappa) spec.kappa = *a.kappa;
  if (a.kappa1) spec.kappa1 = *a.kappa1;
  if (a.max_speed) spec.max_speed = *a.max_speed;
  spec.segments = ParseRange(a.segments, "M");
  spec.reports = ParseRange(a.reports, "N");
  spec.schemes.clear();
  std::string_view rest = a.schemes;
  while (!rest.empty()) {
    size_t comma = rest.find(',');
    std::string_view name = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? "" : rest.substr(comma + 1);
    if (name == "pptm") {
      spec.schemes.push_back(entities::Scheme::kPptm);
    } else if (name == "trpm") {
      spec.schemes.push_back(entities::Scheme::kTrpm);
    } else {
      throw InvalidArgumentError("unknown scheme '" + std::string(name) + "'");
    }
  }
  spec.repetitions = a.repetitions;
  spec.counters_only = a.counters_only;
  spec.reference_widths = a.widths == "reference";
  spec.seed = g.seed.value_or(1);

  bench::BenchResult result = bench::RunBench(spec);
  std::string csv = result.ToCsv();
  if (a.out_path.empty() || a.out_path == "-") {
    std::cout << csv;
  } else {
    WriteFile(a.out_path, csv);
    std::cerr << "wrote " << result.rows.size() << " rows to " << a.out_path
              << "\n";
  }
  std::vector<size_t> bad = result.Mismatches();
  for (size_t i : bad) {
    const auto& r = result.rows[i];
    std::cerr << "count mismatch: " << bench::SchemeName(r.scheme) << " "
              << bench::RoleName(r.role) << " M=" << r.m << " N=" << r.n
              << "\n";
  }
  return bad.empty() ? kOk : kInvariantFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving traffic monitoring: keys, scenarios and "
               "cost sweeps"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--config", g.config_path, "System configuration (JSON)")
      ->check(CLI::ExistingFile);

  KeygenArgs kg;
  CLI::App* keygen = app.add_subcommand("keygen", "Write per-role materials");
  keygen->add_option("-o,--out", kg.out_dir, "Output directory")->required();
  keygen->add_option("--rsu", kg.rsus, "RSU identifiers")->capture_default_str();
  keygen->add_option("--vehicle", kg.vehicles, "Vehicle identities")
      ->capture_default_str();

  RunArgs ra;
  CLI::App* run = app.add_subcommand("run", "Simulate a scenario file");
  run->add_option("scenario", ra.scenario_path, "Scenario file")->required();
  run->add_option("--csv", ra.csv_path, "Write cost rows here");
  run->add_option("--json", ra.json_path, "Write the full result as JSON");

  BenchArgs ba;
  CLI::App* bn = app.add_subcommand("bench", "Cost sweep over M and N");
  bn->add_option("--segments,-M", ba.segments, "M values, e.g. 1..30")
      ->capture_default_str();
  bn->add_option("--reports,-N", ba.reports, "N values, e.g. 1,10,50")
      ->capture_default_str();
  bn->add_option("--schemes", ba.schemes, "pptm, trpm or both")
      ->capture_default_str();
  bn->add_option("--kappa", ba.kappa, "Pairing group order bits (80|160)");
  bn->add_option("--kappa1", ba.kappa1, "Paillier prime bits");
  bn->add_option("--max-speed", ba.max_speed, "V");
  bn->add_option("--repetitions", ba.repetitions, "Wall-clock repetitions")
      ->capture_default_str();
  bn->add_flag("--counters-only", ba.counters_only,
               "Operation counts only; deterministic");
  bn->add_option("--widths", ba.widths,
                 "Report bytes at serialized or reference field widths")
      ->check(CLI::IsMember({"serialized", "reference"}))
      ->capture_default_str();
  bn->add_option("-o,--out", ba.out_path, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*keygen) return Keygen(g, kg);
    if (*run) return Run(g, ra);
    return Bench(g, ba);
  } catch (const InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
  } catch (const DecodeError& e) {
    std::cerr << "decode error: " << e.what() << "\n";
  } catch (const fs::filesystem_error& e) {
    std::cerr << "filesystem error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kInputError;
}
