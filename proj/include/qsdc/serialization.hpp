// Copyright 2026 The QSDC Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Canonical JSON forms of the public value types. Bit strings are "0"/"1"
// text, complex amplitudes [re, im] pairs, enums their to_string names.
// Object keys are emitted sorted, so equal values always dump to equal bytes.
//
// Decoding an object updates only the keys present and rejects unknown keys,
// which is what lets a config file be layered under command-line flags.

#ifndef QSDC_SERIALIZATION_HPP
#define QSDC_SERIALIZATION_HPP

#include <string>

#include "json.hpp"
#include "qsdc/adversary.hpp"
#include "qsdc/analysis.hpp"
#include "qsdc/bit_string.hpp"
#include "qsdc/ecc.hpp"
#include "qsdc/noise.hpp"
#include "qsdc/protocol.hpp"

namespace qsdc {

using Json = nlohmann::json;

void to_json(Json& j, const BitString& bits);
void from_json(const Json& j, BitString& bits);

void to_json(Json& j, const Qubit& state);
Qubit qubit_from_json(const Json& j);

void to_json(Json& j, const ProtocolConfig& config);
void from_json(const Json& j, ProtocolConfig& config);

void to_json(Json& j, const PartyIdentities& ids);
void from_json(const Json& j, PartyIdentities& ids);

void to_json(Json& j, const DeviceModel& device);
void from_json(const Json& j, DeviceModel& device);

void to_json(Json& j, const ChannelModel& channel);
void from_json(const Json& j, ChannelModel& channel);

void to_json(Json& j, const RepetitionCode& code);
RepetitionCode repetition_code_from_json(const Json& j);

/// {"model": attack_name, ...parameters}.
void to_json(Json& j, const AttackModel& attack);
AttackModel attack_from_json(const Json& j);

void to_json(Json& j, const TranscriptEntry& entry);
void from_json(const Json& j, TranscriptEntry& entry);

void to_json(Json& j, const SessionOutcome& outcome);
void from_json(const Json& j, SessionOutcome& outcome);

void to_json(Json& j, const EstimateWithCI& e);
void from_json(const Json& j, EstimateWithCI& e);

void to_json(Json& j, const ComparisonRow& row);
void from_json(const Json& j, ComparisonRow& row);

/// Compact single-line dump.
std::string canonical_dump(const Json& j);

/// Audit document of one session.
Json session_document(const ProtocolConfig& config, const PartyIdentities& identities, const BitString& message,
                      const SessionOutcome& outcome);

}  // namespace qsdc

#endif  // QSDC_SERIALIZATION_HPP
