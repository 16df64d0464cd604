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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pptm/bench.h"
#include "pptm/common.h"
#include "pptm/entities.h"
#include "pptm/paillier.h"
#include "pptm/rng.h"
#include "pptm/scenario.h"
#include "pptm/seqcode.h"
#include "pptm/serialize.h"
#include "pptm/simnet.h"

namespace py = pybind11;

namespace {

using namespace pptm;

py::int_ ToPy(const mpz_class& v) {
  return py::reinterpret_steal<py::int_>(
      PyLong_FromString(v.get_str(16).c_str(), nullptr, 16));
}

mpz_class FromPy(const py::int_& v) {
  std::string hex = py::str(py::module_::import("builtins").attr("format")(v, "x"));
  mpz_class out;
  if (!hex.empty() && hex[0] == '-') {
    out.set_str(hex.substr(1), 16);
    return -out;
  }
  out.set_str(hex, 16);
  return out;
}

entities::Scheme SchemeFrom(const std::string& name) {
  if (name == "pptm" || name == "PPTM") return entities::Scheme::kPptm;
  if (name == "trpm" || name == "TRPM") return entities::Scheme::kTrpm;
  throw InvalidArgumentError("scheme must be pptm or trpm");
}

seqcode::Role RoleFrom(const std::string& name) {
  if (name == "flags") return seqcode::Role::kFlags;
  if (name == "speeds") return seqcode::Role::kSpeeds;
  throw InvalidArgumentError("role must be flags or speeds");
}

class PyPaillier {
 public:
  PyPaillier(int prime_bits, uint64_t seed) : rng_(seed) {
    kp_ = paillier::GenerateKeypair(prime_bits, rng_);
  }
  py::int_ n() const { return ToPy(kp_.pk.n); }
  py::int_ Encrypt(const py::int_& m) {
    return ToPy(paillier::Encrypt(kp_.pk, FromPy(m), rng_).value);
  }
  py::int_ Decrypt(const py::int_& c) const {
    return ToPy(paillier::Decrypt(kp_.sk, kp_.pk,
                                  paillier::Ciphertext{FromPy(c)}));
  }
  py::int_ Add(const py::int_& a, const py::int_& b) const {
    return ToPy(paillier::Add(kp_.pk, paillier::Ciphertext{FromPy(a)},
                              paillier::Ciphertext{FromPy(b)})
                    .value);
  }

 private:
  Rng rng_;
  paillier::Keypair kp_;
};

class PySeqCode {
 public:
  PySeqCode(size_t segments, uint64_t max_vehicles, uint64_t max_value,
            uint64_t seed, unsigned n_bits) {
    Rng rng(seed);
    mpz_class bound = mpz_class(1) << n_bits;
    seq_ = seqcode::Generate(segments, max_vehicles, max_value, bound, rng);
  }
  std::vector<py::int_> Weights() const {
    std::vector<py::int_> out;
    for (const auto& a : seq_.a) out.push_back(ToPy(a));
    return out;
  }
  py::int_ Encode(const std::vector<uint64_t>& v,
                  const std::string& role) const {
    return ToPy(seqcode::Encode(seq_, v, RoleFrom(role)));
  }
  std::vector<uint64_t> Decode(const py::int_& packed,
                               const std::string& role) const {
    return seqcode::Decode(seq_, FromPy(packed), RoleFrom(role));
  }

 private:
  seqcode::SuperIncreasingSeq seq_;
};

std::string RunScenarioText(const std::string& text,
                            std::optional<std::string> scheme,
                            std::optional<uint64_t> seed) {
  simnet::Scenario s = scenario::Parse(text);
  if (scheme) s.scheme = SchemeFrom(*scheme);
  if (seed) s.seed = *seed;
  simnet::Precheck(s);
  return simnet::RunScenario(s).ToJson();
}

std::string RunBenchCsv(const std::vector<size_t>& segments,
                        const std::vector<size_t>& reports,
                        bool counters_only, int kappa, int kappa1,
                        uint64_t max_speed, size_t repetitions, uint64_t seed,
                        bool reference_widths) {
  bench::BenchSpec spec;
  spec.segments = segments;
  spec.reports = reports;
  spec.counters_only = counters_only;
  spec.kappa = kappa;
  spec.kappa1 = kappa1;
  spec.max_speed = max_speed;
  spec.repetitions = repetitions;
  spec.seed = seed;
  spec.reference_widths = reference_widths;
  return bench::RunBench(spec).ToCsv();
}

py::tuple ExpectedCounts(const std::string& scheme, const std::string& role,
                         size_t m, size_t n) {
  bench::Role r;
  if (role == "vehicle") {
    r = bench::Role::kVehicle;
  } else if (role == "RSU" || role == "rsu") {
    r = bench::Role::kRsu;
  } else if (role == "SP" || role == "sp") {
    r = bench::Role::kSp;
  } else {
    throw InvalidArgumentError("role must be vehicle, rsu or sp");
  }
  bench::OpCounts c = bench::ExpectedCounts(SchemeFrom(scheme), r, m, n);
  return py::make_tuple(c.exp_n2, c.pairing, c.mul_g);
}

std::map<std::string, std::string> Keygen(
    uint64_t seed, std::optional<std::string> config_json,
    const std::vector<std::string>& rsus,
    const std::vector<std::string>& vehicles) {
  entities::SystemConfig config;
  if (config_json) config = serialize::ConfigFromJson(*config_json);
  config.Validate();
  if (rsus.empty()) throw InvalidArgumentError("need at least one RSU");
  entities::TrustAuthority ta(config, seed);
  std::map<std::string, std::string> out;
  out["config"] = serialize::ToJson(config);
  for (const auto& id : rsus) {
    out["rsu/" + id] = serialize::ToJson(ta.RegisterRsu(id));
  }
  for (const auto& id : vehicles) {
    out["vehicle/" + id] =
        serialize::ToJson(ta.RegisterVehicle(id, rsus.front()));
  }
  out["sp"] = serialize::ToJson(ta.ServiceProviderMaterial());
  return out;
}

py::dict LinkAttack(uint64_t seed, size_t vehicles) {
  simnet::LinkOutcome o = simnet::RunLinkAttack(simnet::LinkScenario(seed, vehicles));
  py::dict d;
  d["strawman_accuracy"] = o.strawman_accuracy;
  d["encrypted_accuracy"] = o.encrypted_accuracy;
  d["plaintext_signal_fields"] = o.plaintext_signal_fields;
  d["linked_vehicles"] = o.linked_vehicles;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Privacy-preserving traffic monitoring core";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgumentError>(m, "InvalidArgumentError",
                                               PyExc_ValueError);
  py::register_exception<DecodeError>(m, "DecodeError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<SignatureError>(m, "SignatureError", base.ptr());
  py::register_exception<AggregationError>(m, "AggregationError", base.ptr());
  py::register_exception<UnknownPseudonymError>(m, "UnknownPseudonymError",
                                                base.ptr());

  py::class_<PyPaillier>(m, "Paillier")
      .def(py::init<int, uint64_t>(), py::arg("prime_bits"), py::arg("seed"))
      .def_property_readonly("n", &PyPaillier::n)
      .def("encrypt", &PyPaillier::Encrypt, py::arg("m"))
      .def("decrypt", &PyPaillier::Decrypt, py::arg("c"))
      .def("add", &PyPaillier::Add, py::arg("a"), py::arg("b"));

  py::class_<PySeqCode>(m, "SeqCode")
      .def(py::init<size_t, uint64_t, uint64_t, uint64_t, unsigned>(),
           py::arg("segments"), py::arg("max_vehicles"), py::arg("max_value"),
           py::arg("seed"), py::arg("n_bits") = 1024)
      .def_property_readonly("weights", &PySeqCode::Weights)
      .def("encode", &PySeqCode::Encode, py::arg("values"), py::arg("role"))
      .def("decode", &PySeqCode::Decode, py::arg("packed"), py::arg("role"));

  m.def("run_scenario_json", &RunScenarioText, py::arg("text"),
        py::arg("scheme") = py::none(), py::arg("seed") = py::none(),
        "Simulate a scenario given as text; returns the result as JSON.");
  m.def("format_scenario",
        [](const std::string& text) {
          return scenario::Format(scenario::Parse(text));
        },
        py::arg("text"));
  m.def("run_bench_csv", &RunBenchCsv, py::arg("segments"), py::arg("reports"),
        py::arg("counters_only") = true, py::arg("kappa") = 80,
        py::arg("kappa1") = 160, py::arg("max_speed") = 10,
        py::arg("repetitions") = 3, py::arg("seed") = 1,
        py::arg("reference_widths") = false);
  m.def("expected_counts", &ExpectedCounts, py::arg("scheme"), py::arg("role"),
        py::arg("m"), py::arg("n"));
  m.def("keygen", &Keygen, py::arg("seed"),
        py::arg("config_json") = py::none(),
        py::arg("rsus") = std::vector<std::string>{"rsu-0"},
        py::arg("vehicles") = std::vector<std::string>{"veh-0"});
  m.def("link_attack", &LinkAttack, py::arg("seed"), py::arg("vehicles"));
  m.attr("CSV_SCHEMA") = bench::kCsvSchema;
}
