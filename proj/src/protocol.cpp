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

#include "qsdc/protocol.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "qsdc/noise.hpp"

namespace qsdc {

namespace {

enum StreamId : std::uint64_t { kAliceStream = 1, kBobStream = 2, kChannelStream = 3 };

bool in_theta_range(int theta) { return theta >= kThetaMin && theta <= kThetaMax; }

void require_increasing(std::span<const std::size_t> positions, std::size_t bound, const char* what) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] >= bound || (i > 0 && positions[i] <= positions[i - 1])) {
            throw std::invalid_argument(std::string(what) + ": positions must be strictly increasing and in range");
        }
    }
}

struct Slot {
    Qubit qubit;
    Role role;
    std::size_t ordinal;
};

// Places `group` at the final positions `slots` of the grown sequence; the
// relative order of the existing entries and of the group is preserved.
void insert_group(std::vector<Slot>& seq, const std::vector<Qubit>& group, Role role,
                  std::span<const std::size_t> slots) {
    if (slots.size() != group.size()) throw std::invalid_argument("insertion plan size does not match group size");
    const std::size_t total = seq.size() + group.size();
    require_increasing(slots, total, "insertion plan");
    std::vector<Slot> out;
    out.reserve(total);
    std::size_t old_i = 0;
    std::size_t new_i = 0;
    for (std::size_t pos = 0; pos < total; ++pos) {
        if (new_i < slots.size() && slots[new_i] == pos) {
            out.push_back({group[new_i], role, new_i});
            ++new_i;
        } else {
            out.push_back(std::move(seq[old_i++]));
        }
    }
    seq = std::move(out);
}

std::vector<Slot> message_slots(const SequenceParts& parts) {
    require_increasing(parts.check_positions, parts.message.size(), "check positions");
    std::vector<Slot> seq;
    seq.reserve(parts.message.size());
    std::size_t checks = 0;
    std::size_t messages = 0;
    for (std::size_t i = 0; i < parts.message.size(); ++i) {
        const bool is_check = checks < parts.check_positions.size() && parts.check_positions[checks] == i;
        if (is_check) {
            seq.push_back({parts.message[i], Role::Check, checks++});
        } else {
            seq.push_back({parts.message[i], Role::Message, messages++});
        }
    }
    return seq;
}

AssembledSequence finish(std::vector<Slot>&& seq) {
    AssembledSequence out;
    out.qubits.reserve(seq.size());
    out.layout.role_of.reserve(seq.size());
    out.layout.ordinal_of.reserve(seq.size());
    for (auto& s : seq) {
        out.qubits.push_back(std::move(s.qubit));
        out.layout.role_of.push_back(s.role);
        out.layout.ordinal_of.push_back(s.ordinal);
    }
    return out;
}

BasisChoice basis_for_bit(bool bit) { return bit ? BasisChoice::X : BasisChoice::Z; }

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Role role) {
    switch (role) {
        case Role::Message:
            return "message";
        case Role::Check:
            return "check";
        case Role::AuthA:
            return "auth_a";
        case Role::AuthB:
            return "auth_b";
        case Role::Theta:
            return "theta";
        case Role::Decoy:
            return "decoy";
    }
    return "message";
}

std::string_view to_string(BasisChoice basis) { return basis == BasisChoice::Z ? "Z" : "X"; }

BasisChoice basis_choice_from_string(std::string_view name) {
    if (name == "Z") return BasisChoice::Z;
    if (name == "X") return BasisChoice::X;
    throw std::invalid_argument("unknown basis: " + std::string(name));
}

const Basis& basis_of(BasisChoice choice) {
    static const Basis z = Basis::computational();
    static const Basis x = Basis::diagonal();
    return choice == BasisChoice::Z ? z : x;
}

Qubit bb84_state(BasisChoice basis, bool bit) {
    static const Qubit states[4] = {ket0(), ket1(), ket_plus(), ket_minus()};
    return states[(basis == BasisChoice::X ? 2 : 0) + (bit ? 1 : 0)];
}

std::string_view to_string(Party party) { return party == Party::Alice ? "Alice" : "Bob"; }

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::SecurityCheck:
            return "security_check";
        case Stage::AuthA:
            return "auth_a";
        case Stage::AuthB:
            return "auth_b";
        case Stage::Decode:
            return "decode";
        case Stage::Integrity:
            return "integrity";
    }
    return "security_check";
}

std::string_view to_string(SessionStatus status) {
    switch (status) {
        case SessionStatus::Delivered:
            return "Delivered";
        case SessionStatus::AbortedSecurityCheck:
            return "AbortedSecurityCheck";
        case SessionStatus::AbortedAuthA:
            return "AbortedAuthA";
        case SessionStatus::AbortedAuthB:
            return "AbortedAuthB";
        case SessionStatus::AbortedIntegrity:
            return "AbortedIntegrity";
    }
    return "Delivered";
}

// ---------------------------------------------------------------------------
// Configuration

void ProtocolConfig::validate() const {
    if (n < 1) throw std::invalid_argument("message length n must be at least 1");
    if (m < 1) throw std::invalid_argument("at least one decoy photon is required (m >= 1)");
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("identity length k must be even and at least 2");
    if (N != kThetaMax) throw std::invalid_argument("|Theta| is fixed at 360");
    for (double t : {decoy_error_threshold, auth_error_threshold, check_bit_error_threshold}) {
        if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("thresholds must lie in [0, 1]");
    }
}

int ProtocolConfig::max_theta() const {
    if (k >= 9) return kThetaMax;
    return static_cast<int>((std::uint64_t{1} << k) - 1);
}

void PartyIdentities::validate(const ProtocolConfig& config) const {
    if (id_a.size() != config.k || id_b.size() != config.k) {
        throw std::invalid_argument("identities must have exactly k = " + std::to_string(config.k) + " bits");
    }
}

std::size_t SequenceLayout::count(Role role) const {
    return static_cast<std::size_t>(std::count(role_of.begin(), role_of.end(), role));
}

std::vector<std::size_t> SequenceLayout::positions_of(Role role) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < role_of.size(); ++i) {
        if (role_of[i] == role) out.push_back(i);
    }
    return out;
}

std::size_t sequence_length(std::size_t n, std::size_t c, std::size_t k, std::size_t k_prime, std::size_t m) {
    return (n + c) + 3 * k / 2 + k_prime + m;
}

// ---------------------------------------------------------------------------
// Preparation

CheckInsertion insert_check_bits(const BitString& message, std::size_t c, Rng& rng) {
    auto positions = rng.sorted_subset(message.size() + c, c);
    auto values = BitString::random(c, rng);
    return insert_check_bits(message, std::move(positions), values);
}

CheckInsertion insert_check_bits(const BitString& message, std::vector<std::size_t> positions,
                                 const BitString& values) {
    if (positions.size() != values.size()) throw std::invalid_argument("check positions/values size mismatch");
    const std::size_t total = message.size() + positions.size();
    require_increasing(positions, total, "check positions");
    CheckInsertion out;
    out.augmented = BitString(total);
    std::size_t ci = 0;
    std::size_t mi = 0;
    for (std::size_t i = 0; i < total; ++i) {
        if (ci < positions.size() && positions[ci] == i) {
            out.augmented.set(i, values[ci++]);
        } else {
            out.augmented.set(i, message[mi++]);
        }
    }
    out.check_positions = std::move(positions);
    out.check_values = values;
    return out;
}

std::vector<Qubit> encode_message_qubits(const BitString& augmented, int theta, double calibration_offset_deg) {
    if (!in_theta_range(theta)) throw std::invalid_argument("theta must be an integer degree in [1, 360]");
    const Gate u = calibrated_rotation(theta, calibration_offset_deg);
    const Qubit x = apply(u, ket0());
    const Qubit y = apply(u, ket1());
    std::vector<Qubit> out;
    out.reserve(augmented.size());
    for (std::size_t i = 0; i < augmented.size(); ++i) {
        out.push_back(augmented[i] ? y : x);
    }
    return out;
}

std::vector<Qubit> encode_identity_a(const BitString& id_a) {
    if (id_a.size() % 2 != 0) throw std::invalid_argument("Id_A must have even length");
    std::vector<Qubit> out;
    out.reserve(id_a.size() / 2);
    for (std::size_t i = 0; i < id_a.size(); i += 2) {
        out.push_back(bb84_state(basis_for_bit(id_a[i]), id_a[i + 1]));
    }
    return out;
}

std::vector<Qubit> encode_identity_b(const BitString& id_b, const BitString& r) {
    if (id_b.size() != r.size()) throw std::invalid_argument("Id_B and r must have equal length");
    const BitString id_b1 = id_b ^ r;
    std::vector<Qubit> out;
    out.reserve(id_b.size());
    for (std::size_t i = 0; i < id_b.size(); ++i) {
        out.push_back(bb84_state(basis_for_bit(id_b[i]), id_b1[i]));
    }
    return out;
}

BitString theta_bits(int theta) {
    if (!in_theta_range(theta)) throw std::invalid_argument("theta must be an integer degree in [1, 360]");
    const auto value = static_cast<std::uint64_t>(theta);
    return BitString::from_uint(value, bit_length(value));
}

std::vector<Qubit> encode_theta(int theta, const BitString& id_b) {
    const BitString bits = theta_bits(theta);
    if (bits.size() > id_b.size()) {
        throw std::invalid_argument("identity length k is smaller than the bit length of theta");
    }
    std::vector<Qubit> out;
    out.reserve(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        out.push_back(bb84_state(basis_for_bit(id_b[i]), bits[i]));
    }
    return out;
}

DecoyBatch sample_decoys(std::size_t m, Rng& rng) {
    if (m == 0) throw std::invalid_argument("at least one decoy is required");
    std::vector<DecoyDescriptor> descriptors;
    descriptors.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto v = rng.below(4);
        descriptors.push_back({(v & 2U) ? BasisChoice::X : BasisChoice::Z, (v & 1U) != 0});
    }
    return prepare_decoys(std::move(descriptors));
}

DecoyBatch prepare_decoys(std::vector<DecoyDescriptor> descriptors) {
    if (descriptors.empty()) throw std::invalid_argument("at least one decoy is required");
    DecoyBatch out;
    out.states.reserve(descriptors.size());
    for (const auto& d : descriptors) out.states.push_back(bb84_state(d.basis, d.bit));
    out.descriptors = std::move(descriptors);
    return out;
}

AssembledSequence assemble_sequence(const SequenceParts& parts, Rng& rng) {
    std::vector<Slot> seq = message_slots(parts);
    const std::pair<const std::vector<Qubit>*, Role> groups[] = {
        {&parts.auth_a, Role::AuthA}, {&parts.auth_b, Role::AuthB}, {&parts.theta, Role::Theta}, {&parts.decoys, Role::Decoy}};
    for (const auto& [group, role] : groups) {
        const auto slots = rng.sorted_subset(seq.size() + group->size(), group->size());
        insert_group(seq, *group, role, slots);
    }
    return finish(std::move(seq));
}

AssembledSequence assemble_sequence(const SequenceParts& parts, const InsertionPlan& plan) {
    std::vector<Slot> seq = message_slots(parts);
    insert_group(seq, parts.auth_a, Role::AuthA, plan.auth_a);
    insert_group(seq, parts.auth_b, Role::AuthB, plan.auth_b);
    insert_group(seq, parts.theta, Role::Theta, plan.theta);
    insert_group(seq, parts.decoys, Role::Decoy, plan.decoys);
    return finish(std::move(seq));
}

int draw_theta(const ProtocolConfig& config, Rng& rng) {
    return kThetaMin + static_cast<int>(rng.below(static_cast<std::uint64_t>(config.max_theta())));
}

AlicePreparation prepare_alice(const ProtocolConfig& config, const PartyIdentities& identities,
                               const BitString& message, Rng& rng, const PreparationOverrides& overrides,
                               double calibration_offset_deg) {
    config.validate();
    identities.validate(config);
    if (message.size() != config.n) throw std::invalid_argument("message length does not match config.n");

    AlicePreparation alice;
    alice.identities = identities;

    if (overrides.check_positions || overrides.check_values) {
        if (!overrides.check_positions || !overrides.check_values) {
            throw std::invalid_argument("check positions and values must be overridden together");
        }
        if (overrides.check_positions->size() != config.c) throw std::invalid_argument("expected c check positions");
        alice.checks = insert_check_bits(message, *overrides.check_positions, *overrides.check_values);
    } else {
        alice.checks = insert_check_bits(message, config.c, rng);
    }

    alice.theta = overrides.theta ? *overrides.theta : draw_theta(config, rng);
    if (!in_theta_range(alice.theta)) throw std::invalid_argument("theta must be an integer degree in [1, 360]");

    alice.r = overrides.r ? *overrides.r : BitString::random(config.k, rng);
    if (alice.r.size() != config.k) throw std::invalid_argument("r must have k bits");

    DecoyBatch decoys;
    if (overrides.decoys) {
        if (overrides.decoys->size() != config.m) throw std::invalid_argument("expected m decoy descriptors");
        decoys = prepare_decoys(*overrides.decoys);
    } else {
        decoys = sample_decoys(config.m, rng);
    }
    alice.decoys = decoys.descriptors;

    SequenceParts parts;
    parts.message = encode_message_qubits(alice.checks.augmented, alice.theta, calibration_offset_deg);
    parts.check_positions = alice.checks.check_positions;
    parts.auth_a = encode_identity_a(identities.id_a);
    parts.auth_b = encode_identity_b(identities.id_b, alice.r);
    parts.theta = encode_theta(alice.theta, identities.id_b);
    parts.decoys = std::move(decoys.states);

    alice.sequence = overrides.insertion ? assemble_sequence(parts, *overrides.insertion) : assemble_sequence(parts, rng);
    return alice;
}

// ---------------------------------------------------------------------------
// Receiver

ReceivedSequence::ReceivedSequence(std::vector<Qubit> physical, RepetitionLayout layout, double readout_error)
    : physical_(std::move(physical)), layout_(layout), readout_error_(readout_error) {
    if (physical_.size() != layout_.physical_length()) {
        throw std::invalid_argument("received sequence length does not match the repetition layout");
    }
    if (!(readout_error >= 0.0 && readout_error <= 1.0)) throw std::invalid_argument("readout error must be in [0, 1]");
}

BitString ReceivedSequence::measure_copies(std::size_t pos, const Basis& basis, Rng& rng) {
    BitString out(static_cast<std::size_t>(layout_.distance));
    for (int j = 0; j < layout_.distance; ++j) {
        Qubit& q = physical_.at(layout_.physical_index(pos, j));
        auto r = measure_leading_qubit(q, basis, rng);
        q = std::move(r.state);
        bool bit = r.outcome == 1;
        if (readout_error_ > 0.0) bit = readout_flip(bit, readout_error_, rng);
        out.set(static_cast<std::size_t>(j), bit);
    }
    return out;
}

bool ReceivedSequence::measure_logical(std::size_t pos, const Basis& basis, Rng& rng) {
    return decode_majority(measure_copies(pos, basis, rng));
}

bool ReceivedSequence::rotate_and_measure_logical(std::size_t pos, const Gate& gate, Rng& rng) {
    for (int j = 0; j < layout_.distance; ++j) {
        Qubit& q = physical_.at(layout_.physical_index(pos, j));
        q = apply_on_qubit(gate, q);
    }
    return measure_logical(pos, Basis::computational(), rng);
}

SecurityCheckResult run_security_check(ReceivedSequence& received, const DecoyReveal& reveal,
                                       std::span<const DecoyDescriptor> prepared, double threshold, Rng& rng) {
    if (reveal.positions.size() != reveal.bases.size() || reveal.positions.size() != prepared.size()) {
        throw std::invalid_argument("decoy announcement does not match the prepared decoys");
    }
    SecurityCheckResult out;
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < reveal.positions.size(); ++i) {
        const BitString copies = received.measure_copies(reveal.positions[i], basis_of(reveal.bases[i]), rng);
        for (std::size_t j = 0; j < copies.size(); ++j) {
            out.results.outcomes.push_back(copies[j]);
            if (copies[j] != prepared[i].bit) ++mismatches;
        }
    }
    const auto total = out.results.outcomes.size();
    out.error_rate = total == 0 ? 0.0 : static_cast<double>(mismatches) / static_cast<double>(total);
    out.pass = out.error_rate <= threshold;
    return out;
}

AuthAResult authenticate_alice(ReceivedSequence& received, const BitString& id_a,
                               std::span<const std::size_t> positions, double threshold, Rng& rng) {
    if (2 * positions.size() != id_a.size()) throw std::invalid_argument("expected k/2 I_A positions");
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const bool bit = received.measure_logical(positions[i], basis_of(basis_for_bit(id_a[2 * i])), rng);
        if (bit != id_a[2 * i + 1]) ++mismatches;
    }
    AuthAResult out;
    out.error_rate = positions.empty() ? 0.0 : static_cast<double>(mismatches) / static_cast<double>(positions.size());
    out.pass = out.error_rate <= threshold;
    return out;
}

BitString announce_r(ReceivedSequence& received, const BitString& id_b, std::span<const std::size_t> positions,
                     Rng& rng) {
    if (positions.size() != id_b.size()) throw std::invalid_argument("expected k I_B positions");
    BitString id_b1(id_b.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        id_b1.set(i, received.measure_logical(positions[i], basis_of(basis_for_bit(id_b[i])), rng));
    }
    return id_b ^ id_b1;
}

AuthBResult authenticate_bob(ReceivedSequence& received, const BitString& id_b,
                             std::span<const std::size_t> positions, const BitString& alice_r, Rng& rng) {
    AuthBResult out;
    out.recovered_r = announce_r(received, id_b, positions, rng);
    out.r_match = out.recovered_r == alice_r;
    return out;
}

DecodeResult decode_message(ReceivedSequence& received, std::span<const std::size_t> theta_positions,
                            std::span<const std::size_t> announced_positions, const BitString& id_b, Rng& rng) {
    DecodeResult out;
    if (theta_positions.empty() || theta_positions.size() > id_b.size()) return out;
    BitString bits(theta_positions.size());
    for (std::size_t i = 0; i < theta_positions.size(); ++i) {
        bits.set(i, received.measure_logical(theta_positions[i], basis_of(basis_for_bit(id_b[i])), rng));
    }
    const auto value = bits.to_uint();
    if (value < static_cast<std::uint64_t>(kThetaMin) || value > static_cast<std::uint64_t>(kThetaMax)) return out;
    out.theta = static_cast<int>(value);

    std::vector<bool> consumed(received.logical_length(), false);
    for (auto p : announced_positions) consumed.at(p) = true;
    for (auto p : theta_positions) consumed.at(p) = true;

    const Gate undo = rotation_gate(static_cast<double>(*out.theta)).inverse();
    for (std::size_t p = 0; p < consumed.size(); ++p) {
        if (consumed[p]) continue;
        out.augmented.push_back(received.rotate_and_measure_logical(p, undo, rng));
        out.message_positions.push_back(p);
    }
    return out;
}

IntegrityResult verify_integrity(const BitString& augmented, std::span<const std::size_t> check_indices,
                                 const BitString& check_values, double threshold) {
    if (check_indices.size() != check_values.size()) throw std::invalid_argument("check indices/values size mismatch");
    require_increasing(check_indices, augmented.size(), "check indices");
    IntegrityResult out;
    std::size_t mismatches = 0;
    std::size_t ci = 0;
    for (std::size_t i = 0; i < augmented.size(); ++i) {
        if (ci < check_indices.size() && check_indices[ci] == i) {
            if (augmented[i] != check_values[ci]) ++mismatches;
            ++ci;
        } else {
            out.message.push_back(augmented[i]);
        }
    }
    out.error_rate = check_indices.empty() ? 0.0
                                           : static_cast<double>(mismatches) / static_cast<double>(check_indices.size());
    out.pass = out.error_rate <= threshold;
    return out;
}

// ---------------------------------------------------------------------------
// Sessions

SessionStreams SessionStreams::from_seed(std::uint64_t seed) {
    return {Rng(derive_seed(seed, kAliceStream)), Rng(derive_seed(seed, kBobStream)),
            Rng(derive_seed(seed, kChannelStream))};
}

RepetitionLayout repetition_layout(std::size_t logical_length, const SessionOptions& options) {
    RepetitionLayout layout;
    layout.logical_length = logical_length;
    layout.distance = options.repetition ? options.repetition->distance() : 1;
    layout.interleaved = options.interleave_copies;
    return layout;
}

SessionOutcome complete_session(const ProtocolConfig& config, const PartyIdentities& receiver_identities,
                                const AlicePreparation& alice, ReceivedSequence received, Rng& bob_rng) {
    const SequenceLayout& layout = alice.sequence.layout;
    SessionOutcome out;
    auto say = [&out](Party who, ClassicalMessage msg) { out.transcript.push_back({who, std::move(msg)}); };

    // Decoy security check.
    DecoyReveal reveal;
    reveal.positions = layout.positions_of(Role::Decoy);
    for (const auto& d : alice.decoys) reveal.bases.push_back(d.basis);
    say(Party::Alice, reveal);
    const auto check = run_security_check(received, reveal, alice.decoys, config.decoy_error_threshold, bob_rng);
    say(Party::Bob, check.results);
    out.decoy_error_rate = check.error_rate;
    if (!check.pass) {
        say(Party::Alice, Abort{Stage::SecurityCheck, "decoy error rate above threshold"});
        out.status = SessionStatus::AbortedSecurityCheck;
        return out;
    }

    // Bob authenticates Alice.
    const auto auth_a_positions = layout.positions_of(Role::AuthA);
    say(Party::Alice, AuthAPositions{auth_a_positions});
    const auto auth_a =
        authenticate_alice(received, receiver_identities.id_a, auth_a_positions, config.auth_error_threshold, bob_rng);
    out.auth_a_error_rate = auth_a.error_rate;
    say(Party::Bob, AuthAVerdict{auth_a.pass});
    if (!auth_a.pass) {
        say(Party::Bob, Abort{Stage::AuthA, "Id_A mismatch rate above threshold"});
        out.status = SessionStatus::AbortedAuthA;
        return out;
    }

    // Alice authenticates Bob through r.
    const auto auth_b_positions = layout.positions_of(Role::AuthB);
    say(Party::Alice, AuthBPositions{auth_b_positions});
    const auto auth_b = authenticate_bob(received, receiver_identities.id_b, auth_b_positions, alice.r, bob_rng);
    say(Party::Bob, RAnnouncement{auth_b.recovered_r});
    out.r_match = auth_b.r_match;
    if (!auth_b.r_match) {
        say(Party::Alice, Abort{Stage::AuthB, "announced r does not match"});
        out.status = SessionStatus::AbortedAuthB;
        return out;
    }

    // Theta, then the message.
    const auto theta_positions = layout.positions_of(Role::Theta);
    say(Party::Alice, ThetaPositions{theta_positions});
    std::vector<std::size_t> announced = reveal.positions;
    announced.insert(announced.end(), auth_a_positions.begin(), auth_a_positions.end());
    announced.insert(announced.end(), auth_b_positions.begin(), auth_b_positions.end());
    const auto decoded = decode_message(received, theta_positions, announced, receiver_identities.id_b, bob_rng);
    if (!decoded.theta) {
        say(Party::Bob, Abort{Stage::Decode, "decoded theta outside [1, 360]"});
        out.status = SessionStatus::AbortedIntegrity;
        return out;
    }
    out.decoded_augmented = decoded.augmented;

    // Public comparison of the check bits.
    CheckReveal reveal_checks;
    reveal_checks.positions = layout.positions_of(Role::Check);
    reveal_checks.values = alice.checks.check_values;
    say(Party::Alice, reveal_checks);
    std::vector<std::size_t> check_indices;
    for (auto p : reveal_checks.positions) {
        const auto it = std::find(decoded.message_positions.begin(), decoded.message_positions.end(), p);
        if (it == decoded.message_positions.end()) throw std::logic_error("check position was consumed earlier");
        check_indices.push_back(static_cast<std::size_t>(it - decoded.message_positions.begin()));
    }
    const auto integrity =
        verify_integrity(decoded.augmented, check_indices, reveal_checks.values, config.check_bit_error_threshold);
    out.check_bit_error_rate = integrity.error_rate;
    if (!integrity.pass) {
        say(Party::Bob, Abort{Stage::Integrity, "check bit error rate above threshold"});
        out.status = SessionStatus::AbortedIntegrity;
        return out;
    }
    out.status = SessionStatus::Delivered;
    out.recovered_message = integrity.message;
    return out;
}

SessionOutcome run_session(const ProtocolConfig& config, const PartyIdentities& identities,
                           const BitString& message, const ChannelTransform& channel, const SessionOptions& options) {
    auto streams = SessionStreams::from_seed(config.seed);
    const AlicePreparation alice =
        prepare_alice(config, identities, message, streams.alice, options.overrides, options.calibration_offset_deg);
    const RepetitionLayout layout = repetition_layout(alice.sequence.qubits.size(), options);
    std::vector<Qubit> flying = layout.expand(alice.sequence.qubits);
    if (channel) {
        channel(flying, streams.channel);
    }
    ReceivedSequence received(std::move(flying), layout, options.readout_error);
    return complete_session(config, identities, alice, std::move(received), streams.bob);
}

}  // namespace qsdc
