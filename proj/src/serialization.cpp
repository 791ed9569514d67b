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

#include "qsdc/serialization.hpp"

#include <initializer_list>
#include <stdexcept>
#include <string_view>

namespace qsdc {

namespace {

void require_object(const Json& j, std::string_view what) {
    if (!j.is_object()) throw std::invalid_argument(std::string(what) + " must be a JSON object");
}

void reject_unknown(const Json& j, std::string_view what, std::initializer_list<std::string_view> known) {
    require_object(j, what);
    for (const auto& item : j.items()) {
        bool ok = false;
        for (auto k : known) ok = ok || item.key() == k;
        if (!ok) throw std::invalid_argument("unknown " + std::string(what) + " field '" + item.key() + "'");
    }
}

template <typename T>
void read_if(const Json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

Party party_from_string(const std::string& s) {
    if (s == "Alice") return Party::Alice;
    if (s == "Bob") return Party::Bob;
    throw std::invalid_argument("unknown party '" + s + "'");
}

Stage stage_from_string(const std::string& s) {
    for (auto st : {Stage::SecurityCheck, Stage::AuthA, Stage::AuthB, Stage::Decode, Stage::Integrity}) {
        if (to_string(st) == s) return st;
    }
    throw std::invalid_argument("unknown stage '" + s + "'");
}

SessionStatus status_from_string(const std::string& s) {
    for (auto st : {SessionStatus::Delivered, SessionStatus::AbortedSecurityCheck, SessionStatus::AbortedAuthA,
                    SessionStatus::AbortedAuthB, SessionStatus::AbortedIntegrity}) {
        if (to_string(st) == s) return st;
    }
    throw std::invalid_argument("unknown session status '" + s + "'");
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

}  // namespace

void to_json(Json& j, const BitString& bits) { j = bits.str(); }

void from_json(const Json& j, BitString& bits) {
    if (!j.is_string()) throw std::invalid_argument("bit strings are encoded as \"0\"/\"1\" text");
    bits = BitString::parse(j.get<std::string>());
}

void to_json(Json& j, const Qubit& state) {
    j = Json::array();
    for (int i = 0; i < state.dim(); ++i) j.push_back({state[i].real(), state[i].imag()});
}

Qubit qubit_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("a state is an array of [re, im] pairs");
    Qubit::Vector v(static_cast<Eigen::Index>(j.size()));
    if (!is_supported_dim(v.size())) throw std::invalid_argument("unsupported state dimension");
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& a = j.at(i);
        if (!a.is_array() || a.size() != 2) throw std::invalid_argument("amplitudes are [re, im] pairs");
        v(static_cast<Eigen::Index>(i)) = {a.at(0).get<double>(), a.at(1).get<double>()};
    }
    return Qubit(v);
}

void to_json(Json& j, const ProtocolConfig& c) {
    j = Json{{"n", c.n},
             {"c", c.c},
             {"k", c.k},
             {"m", c.m},
             {"N", c.N},
             {"decoy_error_threshold", c.decoy_error_threshold},
             {"auth_error_threshold", c.auth_error_threshold},
             {"check_bit_error_threshold", c.check_bit_error_threshold},
             {"seed", c.seed}};
}

void from_json(const Json& j, ProtocolConfig& c) {
    reject_unknown(j, "protocol",
                   {"n", "c", "k", "m", "N", "decoy_error_threshold", "auth_error_threshold",
                    "check_bit_error_threshold", "seed"});
    read_if(j, "n", c.n);
    read_if(j, "c", c.c);
    read_if(j, "k", c.k);
    read_if(j, "m", c.m);
    read_if(j, "N", c.N);
    read_if(j, "decoy_error_threshold", c.decoy_error_threshold);
    read_if(j, "auth_error_threshold", c.auth_error_threshold);
    read_if(j, "check_bit_error_threshold", c.check_bit_error_threshold);
    read_if(j, "seed", c.seed);
}

void to_json(Json& j, const PartyIdentities& ids) { j = Json{{"id_a", ids.id_a}, {"id_b", ids.id_b}}; }

void from_json(const Json& j, PartyIdentities& ids) {
    reject_unknown(j, "identities", {"id_a", "id_b"});
    read_if(j, "id_a", ids.id_a);
    read_if(j, "id_b", ids.id_b);
}

void to_json(Json& j, const DeviceModel& d) {
    j = Json{{"gate_error", d.gate_error},
             {"gate_duration_ns", d.gate_duration_ns},
             {"t1_us", d.t1_us},
             {"readout_error", d.readout_error},
             {"calibration_offset_deg", d.calibration_offset_deg}};
}

void from_json(const Json& j, DeviceModel& d) {
    reject_unknown(j, "device", {"gate_error", "gate_duration_ns", "t1_us", "readout_error", "calibration_offset_deg"});
    read_if(j, "gate_error", d.gate_error);
    read_if(j, "gate_duration_ns", d.gate_duration_ns);
    read_if(j, "t1_us", d.t1_us);
    read_if(j, "readout_error", d.readout_error);
    read_if(j, "calibration_offset_deg", d.calibration_offset_deg);
}

void to_json(Json& j, const ChannelModel& ch) {
    j = Json{{"n_gates", ch.n_gates}, {"kind", std::string(to_string(ch.kind))}, {"device", ch.device}};
}

void from_json(const Json& j, ChannelModel& ch) {
    reject_unknown(j, "channel", {"n_gates", "kind", "device"});
    read_if(j, "n_gates", ch.n_gates);
    if (j.contains("kind")) ch.kind = gate_error_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("device")) from_json(j.at("device"), ch.device);
}

void to_json(Json& j, const RepetitionCode& code) { j = Json{{"distance", code.distance()}}; }

RepetitionCode repetition_code_from_json(const Json& j) {
    reject_unknown(j, "ecc", {"distance"});
    return RepetitionCode(j.at("distance").get<int>());
}

void to_json(Json& j, const AttackModel& attack) {
    j = Json{{"model", std::string(attack_name(attack))}};
    if (const auto* a = std::get_if<InterceptResend>(&attack)) {
        j["theta0"] = optional_json(a->theta0);
    } else if (const auto* e = std::get_if<EntangleMeasure>(&attack)) {
        j["fidelity"] = e->fidelity;
    } else if (const auto* d = std::get_if<DenialOfService>(&attack)) {
        j["weights"] = d->weights;
    }
}

AttackModel attack_from_json(const Json& j) {
    require_object(j, "attack");
    AttackModel attack = attack_from_name(j.at("model").get<std::string>());
    if (auto* a = std::get_if<InterceptResend>(&attack)) {
        reject_unknown(j, "attack", {"model", "theta0"});
        if (j.contains("theta0")) a->theta0 = optional_from<double>(j.at("theta0"));
    } else if (auto* e = std::get_if<EntangleMeasure>(&attack)) {
        reject_unknown(j, "attack", {"model", "fidelity"});
        read_if(j, "fidelity", e->fidelity);
    } else if (auto* d = std::get_if<DenialOfService>(&attack)) {
        reject_unknown(j, "attack", {"model", "weights"});
        read_if(j, "weights", d->weights);
    } else {
        reject_unknown(j, "attack", {"model"});
    }
    validate_attack(attack);
    return attack;
}

void to_json(Json& j, const TranscriptEntry& entry) {
    j = Json{{"sender", std::string(to_string(entry.sender))}};
    std::visit(
        [&j](const auto& msg) {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, DecoyReveal>) {
                std::vector<std::string> bases;
                for (auto b : msg.bases) bases.emplace_back(to_string(b));
                j["type"] = "decoy_reveal";
                j["positions"] = msg.positions;
                j["bases"] = bases;
            } else if constexpr (std::is_same_v<T, DecoyResults>) {
                j["type"] = "decoy_results";
                j["outcomes"] = msg.outcomes;
            } else if constexpr (std::is_same_v<T, AuthAPositions>) {
                j["type"] = "auth_a_positions";
                j["positions"] = msg.positions;
            } else if constexpr (std::is_same_v<T, AuthAVerdict>) {
                j["type"] = "auth_a_verdict";
                j["accepted"] = msg.accepted;
            } else if constexpr (std::is_same_v<T, AuthBPositions>) {
                j["type"] = "auth_b_positions";
                j["positions"] = msg.positions;
            } else if constexpr (std::is_same_v<T, RAnnouncement>) {
                j["type"] = "r_announcement";
                j["r"] = msg.r;
            } else if constexpr (std::is_same_v<T, ThetaPositions>) {
                j["type"] = "theta_positions";
                j["positions"] = msg.positions;
            } else if constexpr (std::is_same_v<T, CheckReveal>) {
                j["type"] = "check_reveal";
                j["positions"] = msg.positions;
                j["values"] = msg.values;
            } else {
                j["type"] = "abort";
                j["stage"] = std::string(to_string(msg.stage));
                j["reason"] = msg.reason;
            }
        },
        entry.message);
}

void from_json(const Json& j, TranscriptEntry& entry) {
    require_object(j, "transcript entry");
    entry.sender = party_from_string(j.at("sender").get<std::string>());
    const auto type = j.at("type").get<std::string>();
    using Positions = std::vector<std::size_t>;
    if (type == "decoy_reveal") {
        DecoyReveal m;
        m.positions = j.at("positions").get<Positions>();
        for (const auto& b : j.at("bases")) m.bases.push_back(basis_choice_from_string(b.get<std::string>()));
        entry.message = m;
    } else if (type == "decoy_results") {
        entry.message = DecoyResults{j.at("outcomes").get<BitString>()};
    } else if (type == "auth_a_positions") {
        entry.message = AuthAPositions{j.at("positions").get<Positions>()};
    } else if (type == "auth_a_verdict") {
        entry.message = AuthAVerdict{j.at("accepted").get<bool>()};
    } else if (type == "auth_b_positions") {
        entry.message = AuthBPositions{j.at("positions").get<Positions>()};
    } else if (type == "r_announcement") {
        entry.message = RAnnouncement{j.at("r").get<BitString>()};
    } else if (type == "theta_positions") {
        entry.message = ThetaPositions{j.at("positions").get<Positions>()};
    } else if (type == "check_reveal") {
        entry.message = CheckReveal{j.at("positions").get<Positions>(), j.at("values").get<BitString>()};
    } else if (type == "abort") {
        entry.message = Abort{stage_from_string(j.at("stage").get<std::string>()), j.at("reason").get<std::string>()};
    } else {
        throw std::invalid_argument("unknown transcript message type '" + type + "'");
    }
}

void to_json(Json& j, const SessionOutcome& o) {
    j = Json{{"status", std::string(to_string(o.status))},
             {"recovered_message", optional_json(o.recovered_message)},
             {"decoded_augmented", optional_json(o.decoded_augmented)},
             {"decoy_error_rate", o.decoy_error_rate},
             {"auth_a_error_rate", o.auth_a_error_rate},
             {"r_match", o.r_match},
             {"check_bit_error_rate", o.check_bit_error_rate},
             {"transcript", o.transcript}};
}

void from_json(const Json& j, SessionOutcome& o) {
    reject_unknown(j, "outcome",
                   {"status", "recovered_message", "decoded_augmented", "decoy_error_rate", "auth_a_error_rate",
                    "r_match", "check_bit_error_rate", "transcript"});
    o.status = status_from_string(j.at("status").get<std::string>());
    o.recovered_message = optional_from<BitString>(j.at("recovered_message"));
    o.decoded_augmented = optional_from<BitString>(j.at("decoded_augmented"));
    j.at("decoy_error_rate").get_to(o.decoy_error_rate);
    j.at("auth_a_error_rate").get_to(o.auth_a_error_rate);
    j.at("r_match").get_to(o.r_match);
    j.at("check_bit_error_rate").get_to(o.check_bit_error_rate);
    o.transcript = j.at("transcript").get<Transcript>();
}

void to_json(Json& j, const EstimateWithCI& e) {
    j = Json{{"point", e.point},
             {"stderr", e.std_error},
             {"n_trials", e.n_trials},
             {"ci_low", e.ci_low},
             {"ci_high", e.ci_high}};
}

void from_json(const Json& j, EstimateWithCI& e) {
    j.at("point").get_to(e.point);
    j.at("stderr").get_to(e.std_error);
    j.at("n_trials").get_to(e.n_trials);
    j.at("ci_low").get_to(e.ci_low);
    j.at("ci_high").get_to(e.ci_high);
}

void to_json(Json& j, const ComparisonRow& row) {
    j = Json{{"quantity", row.quantity},
             {"params", row.params},
             {"closed_form", row.closed_form},
             {"point", row.simulated.point},
             {"stderr", row.simulated.std_error},
             {"ci_low", row.simulated.ci_low},
             {"ci_high", row.simulated.ci_high},
             {"n_trials", row.simulated.n_trials},
             {"tolerance", row.tolerance},
             {"pass", row.pass}};
}

void from_json(const Json& j, ComparisonRow& row) {
    reject_unknown(j, "report row",
                   {"quantity", "params", "closed_form", "point", "stderr", "ci_low", "ci_high", "n_trials",
                    "tolerance", "pass"});
    j.at("quantity").get_to(row.quantity);
    row.params = j.at("params").get<Params>();
    j.at("closed_form").get_to(row.closed_form);
    from_json(j, row.simulated);
    j.at("tolerance").get_to(row.tolerance);
    j.at("pass").get_to(row.pass);
}

std::string canonical_dump(const Json& j) { return j.dump(); }

Json session_document(const ProtocolConfig& config, const PartyIdentities& identities, const BitString& message,
                      const SessionOutcome& outcome) {
    return Json{{"config", config}, {"identities", identities}, {"message", message}, {"outcome", outcome}};
}

}  // namespace qsdc
