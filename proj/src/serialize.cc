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

#include "pptm/serialize.h"

#include "json.hpp"
#include "pptm/bigint.h"

namespace pptm::serialize {

namespace {

using nlohmann::json;
using namespace entities;

json Parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw DecodeError(std::string("invalid JSON: ") + e.what());
  }
}

// Field access that reports schema problems as DecodeError.
template <typename T>
T Get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DecodeError(std::string("missing or mistyped field '") + key + "'");
  }
}

const json& At(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw DecodeError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::string Hex(const mpz_class& v) { return ToHexString(v); }
mpz_class Int(const json& j, const char* key) {
  return FromHexString(Get<std::string>(j, key));
}

json ConfigJson(const SystemConfig& c) {
  return json{{"kappa", c.kappa},
              {"kappa1", c.kappa1},
              {"segments", c.segments},
              {"max_vehicles", c.max_vehicles},
              {"max_speed", c.max_speed},
              {"freshness_window_ms", c.freshness_window_ms},
              {"pseudonyms_per_vehicle", c.pseudonyms_per_vehicle},
              {"speed_scale", c.speed_scale}};
}

SystemConfig ConfigFrom(const json& j) {
  SystemConfig c;
  c.kappa = Get<int>(j, "kappa");
  c.kappa1 = Get<int>(j, "kappa1");
  c.segments = Get<size_t>(j, "segments");
  c.max_vehicles = Get<uint64_t>(j, "max_vehicles");
  c.max_speed = Get<uint64_t>(j, "max_speed");
  c.freshness_window_ms = Get<int64_t>(j, "freshness_window_ms");
  c.pseudonyms_per_vehicle = Get<size_t>(j, "pseudonyms_per_vehicle");
  c.speed_scale = Get<uint32_t>(j, "speed_scale");
  return c;
}

json GroupJson(const pairing::GroupParams& gp) {
  return json{{"kappa", gp.kappa},
              {"q", Hex(gp.q)},
              {"p", Hex(gp.p)},
              {"cofactor", Hex(gp.cofactor)},
              {"generator", ToHex(pairing::EncodePoint(gp, gp.generator))},
              {"version", gp.version}};
}

pairing::GroupParams GroupFrom(const json& j) {
  pairing::GroupParams gp;
  gp.kappa = Get<int>(j, "kappa");
  gp.q = Int(j, "q");
  gp.p = Int(j, "p");
  gp.cofactor = Int(j, "cofactor");
  gp.version = Get<std::string>(j, "version");
  if (gp.version != pairing::kHashToGroupVersion) {
    throw DecodeError("unsupported hash-to-group version " + gp.version);
  }
  if (gp.cofactor * gp.q != gp.p + 1) {
    throw DecodeError("inconsistent group parameters");
  }
  gp.generator =
      pairing::DecodePoint(gp, FromHex(Get<std::string>(j, "generator")));
  return gp;
}

json PointJson(const pairing::GroupParams& gp, const pairing::G1Point& p) {
  return ToHex(pairing::EncodePoint(gp, p));
}

pairing::G1Point PointFrom(const pairing::GroupParams& gp, const json& j,
                           const char* key) {
  return pairing::DecodePoint(gp, FromHex(Get<std::string>(j, key)));
}

json PkJson(const paillier::PublicKey& pk) {
  return json{{"n", Hex(pk.n)}, {"g", Hex(pk.g)}};
}

paillier::PublicKey PkFrom(const json& j) {
  paillier::PublicKey pk;
  pk.n = Int(j, "n");
  pk.g = Int(j, "g");
  pk.n_squared = pk.n * pk.n;
  return pk;
}

json SeqJson(const seqcode::SuperIncreasingSeq& s) {
  json a = json::array();
  for (const mpz_class& w : s.a) a.push_back(Hex(w));
  return json{{"a", a},
              {"max_vehicles", s.max_vehicles},
              {"max_value", s.max_value}};
}

seqcode::SuperIncreasingSeq SeqFrom(const json& j) {
  std::vector<mpz_class> a;
  for (const json& w : At(j, "a")) {
    if (!w.is_string()) throw DecodeError("sequence weight must be hex");
    a.push_back(FromHexString(w.get<std::string>()));
  }
  try {
    return seqcode::FromWeights(std::move(a), Get<uint64_t>(j, "max_vehicles"),
                                Get<uint64_t>(j, "max_value"));
  } catch (const InvalidArgumentError& e) {
    throw DecodeError(e.what());
  }
}

}  // namespace

std::string ToJson(const SystemConfig& config) {
  return ConfigJson(config).dump(2);
}

SystemConfig ConfigFromJson(std::string_view text) {
  return ConfigFrom(Parse(text));
}

std::string ToJson(const VehicleCredentials& c) {
  json pseudonyms = json::array();
  for (const PseudonymCredential& p : c.pseudonyms) {
    pseudonyms.push_back(json{{"pid", ToHex(p.pid)},
                              {"x", Hex(p.key.x)},
                              {"y", PointJson(c.group, p.verify_key.y)}});
  }
  json j{{"role", "vehicle"},
         {"config", ConfigJson(c.config)},
         {"group", GroupJson(c.group)},
         {"paillier_pk", PkJson(c.pk)},
         {"rsu_id", c.rsu_id},
         {"rsu_verify_key", PointJson(c.group, c.rsu_key.y)},
         {"seq", SeqJson(c.seq)},
         {"pseudonyms", pseudonyms}};
  return j.dump(2);
}

VehicleCredentials VehicleFromJson(std::string_view text) {
  json j = Parse(text);
  if (Get<std::string>(j, "role") != "vehicle") {
    throw DecodeError("not a vehicle credential file");
  }
  VehicleCredentials c;
  c.config = ConfigFrom(At(j, "config"));
  c.group = GroupFrom(At(j, "group"));
  c.pk = PkFrom(At(j, "paillier_pk"));
  c.rsu_id = Get<std::string>(j, "rsu_id");
  c.rsu_key.y = PointFrom(c.group, j, "rsu_verify_key");
  c.seq = SeqFrom(At(j, "seq"));
  for (const json& p : At(j, "pseudonyms")) {
    c.pseudonyms.push_back({FromHex(Get<std::string>(p, "pid")),
                            {Int(p, "x")},
                            {PointFrom(c.group, p, "y")}});
  }
  return c;
}

std::string ToJson(const RsuMaterial& m) {
  json j{{"role", "rsu"},
         {"config", ConfigJson(m.config)},
         {"group", GroupJson(m.group)},
         {"paillier_pk", PkJson(m.pk)},
         {"rsu_id", m.rsu_id},
         {"signing_key", Hex(m.key.x)},
         {"verify_key", PointJson(m.group, m.verify_key.y)}};
  return j.dump(2);
}

RsuMaterial RsuFromJson(std::string_view text) {
  json j = Parse(text);
  if (Get<std::string>(j, "role") != "rsu") {
    throw DecodeError("not an RSU material file");
  }
  RsuMaterial m;
  m.config = ConfigFrom(At(j, "config"));
  m.group = GroupFrom(At(j, "group"));
  m.pk = PkFrom(At(j, "paillier_pk"));
  m.rsu_id = Get<std::string>(j, "rsu_id");
  m.key.x = Int(j, "signing_key");
  m.verify_key.y = PointFrom(m.group, j, "verify_key");
  return m;
}

std::string ToJson(const SpMaterial& m) {
  json rsus = json::array();
  for (const SpRsuRecord& r : m.rsus) {
    rsus.push_back(json{{"rsu_id", r.rsu_id},
                        {"verify_key", PointJson(m.group, r.verify_key.y)},
                        {"seq", SeqJson(r.seq)}});
  }
  json j{{"role", "sp"},
         {"config", ConfigJson(m.config)},
         {"group", GroupJson(m.group)},
         {"paillier_pk", PkJson(m.pk)},
         {"paillier_sk",
          json{{"lambda", Hex(m.sk.lambda)}, {"mu", Hex(m.sk.mu)}}},
         {"rsus", rsus}};
  return j.dump(2);
}

SpMaterial SpFromJson(std::string_view text) {
  json j = Parse(text);
  if (Get<std::string>(j, "role") != "sp") {
    throw DecodeError("not an SP material file");
  }
  SpMaterial m;
  m.config = ConfigFrom(At(j, "config"));
  m.group = GroupFrom(At(j, "group"));
  m.pk = PkFrom(At(j, "paillier_pk"));
  const json& sk = At(j, "paillier_sk");
  m.sk.lambda = Int(sk, "lambda");
  m.sk.mu = Int(sk, "mu");
  for (const json& r : At(j, "rsus")) {
    m.rsus.push_back({Get<std::string>(r, "rsu_id"),
                      {PointFrom(m.group, r, "verify_key")},
                      SeqFrom(At(r, "seq"))});
  }
  return m;
}

std::string ToJson(const TrafficBulletin& b) {
  json entries = json::array();
  for (const BulletinEntry& e : b.entries) {
    entries.push_back(json{{"segment", e.segment},
                           {"count", e.count},
                           {"average_speed", e.average ? json(*e.average)
                                                       : json(nullptr)}});
  }
  json j{{"rsu_id", b.rsu_id},
         {"ts", b.ts},
         {"speed_scale", b.speed_scale},
         {"segments", entries}};
  return j.dump(2);
}

TrafficBulletin BulletinFromJson(std::string_view text) {
  json j = Parse(text);
  TrafficBulletin b;
  b.rsu_id = Get<std::string>(j, "rsu_id");
  b.ts = Get<int64_t>(j, "ts");
  b.speed_scale = Get<uint32_t>(j, "speed_scale");
  for (const json& e : At(j, "segments")) {
    BulletinEntry entry;
    entry.segment = Get<size_t>(e, "segment");
    entry.count = Get<uint64_t>(e, "count");
    const json& avg = At(e, "average_speed");
    if (!avg.is_null()) {
      if (!avg.is_number_unsigned()) {
        throw DecodeError("average_speed must be an unsigned integer or null");
      }
      entry.average = avg.get<uint64_t>();
    }
    b.entries.push_back(entry);
  }
  return b;
}

}  // namespace pptm::serialize
