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

#ifndef PPTM_SCENARIO_H_
#define PPTM_SCENARIO_H_

#include <string>
#include <string_view>

#include "pptm/common.h"
#include "pptm/simnet.h"

// Plain-text scenario files.
//
//   # comment
//   key = value                    top-level settings (see below)
//   [vehicles]
//   <id> <segment> <entry_ms> <exit_ms> <speed>   one visit per row
//   <id>                                          vehicle with no visits
//   [requests]
//   <time_ms> <time_range_ms>
//   [adversary]
//   tamper round=<r> vehicle=<id> field=<name> [byte=<k>] [mask=<m>]
//   replay round=<r> target=request|report [vehicle=<id>] delay_ms=<d>
//   forge round=<r> [rsu_id=<id>]
//   eavesdrop
//   link round=<r>
//   [expect]
//   <round> <segment> <count> <average|->  statistics the SP must publish
//
// Settings: seed, scheme (pptm | trpm), rsu_id, kappa, kappa1, segments,
// max_vehicles, max_speed, freshness_window_ms, pseudonyms_per_vehicle,
// speed_scale, collection_window_ms. Segments are 0-based.
namespace pptm::scenario {

class ParseError : public InvalidArgumentError {
 public:
  ParseError(size_t line, const std::string& message);
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Settings absent from the text keep their values from `base`.
simnet::Scenario Parse(std::string_view text, simnet::Scenario base = {});
simnet::Scenario LoadFile(const std::string& path,
                          simnet::Scenario base = {});
std::string Format(const simnet::Scenario& s);

}  // namespace pptm::scenario

#endif  // PPTM_SCENARIO_H_
