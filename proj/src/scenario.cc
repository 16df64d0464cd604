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

#include "pptm/scenario.h"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace pptm::scenario {

namespace {

using simnet::AdversaryAction;
using simnet::AdversaryKind;
using simnet::Scenario;

std::string_view Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> Split(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

template <typename T>
T Number(size_t line, std::string_view text, std::string_view what) {
  T value{};
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
    base = 16;
  }
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, "invalid " + std::string(what) + " '" +
                               std::string(text) + "'");
  }
  return value;
}

void SetKey(Scenario& s, size_t line, const std::string& key,
            const std::string& value) {
  auto& c = s.config;
  if (key == "seed") {
    s.seed = Number<uint64_t>(line, value, key);
  } else if (key == "scheme") {
    if (value == "pptm") {
      s.scheme = simnet::Scheme::kPptm;
    } else if (value == "trpm") {
      s.scheme = simnet::Scheme::kTrpm;
    } else {
      throw ParseError(line, "scheme must be pptm or trpm");
    }
  } else if (key == "rsu_id") {
    s.rsu_id = value;
  } else if (key == "kappa") {
    c.kappa = Number<int>(line, value, key);
  } else if (key == "kappa1") {
    c.kappa1 = Number<int>(line, value, key);
  } else if (key == "segments") {
    c.segments = Number<size_t>(line, value, key);
  } else if (key == "max_vehicles") {
    c.max_vehicles = Number<uint64_t>(line, value, key);
  } else if (key == "max_speed") {
    c.max_speed = Number<uint64_t>(line, value, key);
  } else if (key == "freshness_window_ms") {
    c.freshness_window_ms = Number<int64_t>(line, value, key);
  } else if (key == "pseudonyms_per_vehicle") {
    c.pseudonyms_per_vehicle = Number<size_t>(line, value, key);
  } else if (key == "speed_scale") {
    c.speed_scale = Number<uint32_t>(line, value, key);
  } else if (key == "collection_window_ms") {
    s.collection_window_ms = Number<int64_t>(line, value, key);
  } else {
    throw ParseError(line, "unknown setting '" + key + "'");
  }
}

AdversaryAction ParseAction(size_t line, const std::vector<std::string>& tok) {
  static const std::map<std::string, AdversaryKind> kKinds = {
      {"eavesdrop", AdversaryKind::kEavesdrop},
      {"tamper", AdversaryKind::kTamper},
      {"replay", AdversaryKind::kReplay},
      {"forge", AdversaryKind::kForge},
      {"link", AdversaryKind::kLink}};
  auto kind = kKinds.find(tok[0]);
  if (kind == kKinds.end()) {
    throw ParseError(line, "unknown adversary action '" + tok[0] + "'");
  }
  AdversaryAction a;
  a.kind = kind->second;
  for (size_t i = 1; i < tok.size(); ++i) {
    size_t eq = tok[i].find('=');
    if (eq == std::string::npos) {
      throw ParseError(line, "expected key=value, got '" + tok[i] + "'");
    }
    std::string key = tok[i].substr(0, eq);
    std::string value = tok[i].substr(eq + 1);
    if (key == "round") {
      a.round = Number<size_t>(line, value, key);
    } else if (key == "vehicle") {
      a.vehicle = value;
    } else if (key == "field" || key == "target" || key == "rsu_id") {
      a.target = value;
    } else if (key == "byte") {
      a.byte = Number<size_t>(line, value, key);
    } else if (key == "mask") {
      a.mask = Number<uint8_t>(line, value, key);
    } else if (key == "delay_ms") {
      a.delay_ms = Number<int64_t>(line, value, key);
    } else {
      throw ParseError(line, "unknown adversary parameter '" + key + "'");
    }
  }
  return a;
}

}  // namespace

ParseError::ParseError(size_t line, const std::string& message)
    : InvalidArgumentError("line " + std::to_string(line) + ": " + message),
      line_(line) {}

Scenario Parse(std::string_view text, Scenario base) {
  Scenario s = std::move(base);
  s.vehicles.clear();
  s.requests.clear();
  s.adversary.clear();
  s.expected.clear();
  enum class Section {
    kTop,
    kVehicles,
    kRequests,
    kAdversary,
    kExpect
  } section =
      Section::kTop;
  std::map<std::string, size_t> index;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (size_t hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    std::string_view line = Trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line == "[vehicles]") {
        section = Section::kVehicles;
      } else if (line == "[requests]") {
        section = Section::kRequests;
      } else if (line == "[adversary]") {
        section = Section::kAdversary;
      } else if (line == "[expect]") {
        section = Section::kExpect;
      } else {
        throw ParseError(line_no, "unknown section " + std::string(line));
      }
      continue;
    }

    switch (section) {
      case Section::kTop: {
        size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
          throw ParseError(line_no, "expected key = value");
        }
        std::string key(Trim(line.substr(0, eq)));
        std::string value(Trim(line.substr(eq + 1)));
        if (key.empty() || value.empty()) {
          throw ParseError(line_no, "expected key = value");
        }
        SetKey(s, line_no, key, value);
        break;
      }
      case Section::kVehicles: {
        std::vector<std::string> tok = Split(line);
        if (tok.size() != 1 && tok.size() != 5) {
          throw ParseError(line_no,
                           "vehicle rows are: id segment entry_ms exit_ms "
                           "speed");
        }
        auto [it, inserted] = index.emplace(tok[0], s.vehicles.size());
        if (inserted) s.vehicles.push_back({tok[0], {}});
        if (tok.size() == 5) {
          simnet::Visit v;
          v.segment = Number<size_t>(line_no, tok[1], "segment");
          v.entry_ms = Number<int64_t>(line_no, tok[2], "entry time");
          v.exit_ms = Number<int64_t>(line_no, tok[3], "exit time");
          v.speed = Number<uint64_t>(line_no, tok[4], "speed");
          if (v.exit_ms < v.entry_ms) {
            throw ParseError(line_no, "exit time before entry time");
          }
          s.vehicles[it->second].visits.push_back(v);
        }
        break;
      }
      case Section::kRequests: {
        std::vector<std::string> tok = Split(line);
        if (tok.size() != 2) {
          throw ParseError(line_no, "request rows are: time_ms time_range_ms");
        }
        s.requests.push_back(
            {Number<int64_t>(line_no, tok[0], "request time"),
             Number<int64_t>(line_no, tok[1], "time range")});
        break;
      }
      case Section::kAdversary:
        s.adversary.push_back(ParseAction(line_no, Split(line)));
        break;
      case Section::kExpect: {
        std::vector<std::string> tok = Split(line);
        if (tok.size() != 4) {
          throw ParseError(line_no,
                           "expect rows are: round segment count average|-");
        }
        simnet::ExpectedStat e;
        e.round = Number<size_t>(line_no, tok[0], "round");
        e.segment = Number<size_t>(line_no, tok[1], "segment");
        e.count = Number<uint64_t>(line_no, tok[2], "count");
        if (tok[3] != "-") {
          e.average = Number<uint64_t>(line_no, tok[3], "average");
        }
        s.expected.push_back(e);
        break;
      }
    }
  }
  return s;
}

Scenario LoadFile(const std::string& path, Scenario base) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str(), std::move(base));
}

std::string Format(const Scenario& s) {
  std::ostringstream out;
  const auto& c = s.config;
  out << "seed = " << s.seed << "\n"
      << "scheme = " << (s.scheme == simnet::Scheme::kPptm ? "pptm" : "trpm")
      << "\n"
      << "rsu_id = " << s.rsu_id << "\n"
      << "kappa = " << c.kappa << "\n"
      << "kappa1 = " << c.kappa1 << "\n"
      << "segments = " << c.segments << "\n"
      << "max_vehicles = " << c.max_vehicles << "\n"
      << "max_speed = " << c.max_speed << "\n"
      << "freshness_window_ms = " << c.freshness_window_ms << "\n"
      << "pseudonyms_per_vehicle = " << c.pseudonyms_per_vehicle << "\n"
      << "speed_scale = " << c.speed_scale << "\n"
      << "collection_window_ms = " << s.collection_window_ms << "\n";
  out << "\n[vehicles]\n";
  for (const auto& v : s.vehicles) {
    if (v.visits.empty()) out << v.id << "\n";
    for (const auto& visit : v.visits) {
      out << v.id << " " << visit.segment << " " << visit.entry_ms << " "
          << visit.exit_ms << " " << visit.speed << "\n";
    }
  }
  out << "\n[requests]\n";
  for (const auto& r : s.requests) {
    out << r.time_ms << " " << r.time_range_ms << "\n";
  }
  out << "\n[adversary]\n";
  for (const auto& a : s.adversary) {
    out << simnet::AdversaryKindName(a.kind);
    switch (a.kind) {
      case AdversaryKind::kEavesdrop:
        break;
      case AdversaryKind::kTamper:
        out << " round=" << a.round << " vehicle=" << a.vehicle
            << " field=" << a.target << " byte=" << a.byte
            << " mask=" << static_cast<int>(a.mask);
        break;
      case AdversaryKind::kReplay:
        out << " round=" << a.round << " target=" << a.target;
        if (!a.vehicle.empty()) out << " vehicle=" << a.vehicle;
        out << " delay_ms=" << a.delay_ms;
        break;
      case AdversaryKind::kForge:
        out << " round=" << a.round;
        if (!a.target.empty()) out << " rsu_id=" << a.target;
        break;
      case AdversaryKind::kLink:
        out << " round=" << a.round;
        break;
    }
    out << "\n";
  }
  if (!s.expected.empty()) out << "\n[expect]\n";
  for (const auto& e : s.expected) {
    out << e.round << " " << e.segment << " " << e.count << " "
        << (e.average ? std::to_string(*e.average) : "-") << "\n";
  }
  return out.str();
}

}  // namespace pptm::scenario
