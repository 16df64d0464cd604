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

#ifndef PPTM_SERIALIZE_H_
#define PPTM_SERIALIZE_H_

#include <string>
#include <string_view>

#include "pptm/entities.h"

// JSON forms of the per-role materials and of the public bulletin. Big
// integers and byte strings are lowercase hex; keys are emitted in sorted
// order so equal values serialize to identical bytes. Parsers throw
// DecodeError on missing or mistyped fields.
namespace pptm::serialize {

std::string ToJson(const entities::SystemConfig& config);
entities::SystemConfig ConfigFromJson(std::string_view text);

std::string ToJson(const entities::VehicleCredentials& creds);
entities::VehicleCredentials VehicleFromJson(std::string_view text);

std::string ToJson(const entities::RsuMaterial& material);
entities::RsuMaterial RsuFromJson(std::string_view text);

std::string ToJson(const entities::SpMaterial& material);
entities::SpMaterial SpFromJson(std::string_view text);

// Undefined averages are written as null.
std::string ToJson(const entities::TrafficBulletin& bulletin);
entities::TrafficBulletin BulletinFromJson(std::string_view text);

}  // namespace pptm::serialize

#endif  // PPTM_SERIALIZE_H_
