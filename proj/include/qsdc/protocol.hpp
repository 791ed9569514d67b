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

// The single-basis QSDC session with mutual authentication.
//
// Alice hides the message qubits (rotated by a secret angle theta) among
// identity-encoding qubits for both parties, the binary encoding of theta and
// BB84 decoys. Bob checks the decoys, authenticates Alice, proves his own
// identity by announcing r, learns theta and finally decodes the message.
//
// All positions exchanged over the classical channel index the original
// transmitted sequence; measured qubits are never re-indexed.

#ifndef QSDC_PROTOCOL_HPP
#define QSDC_PROTOCOL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsdc/bit_string.hpp"
#include "qsdc/ecc.hpp"
#include "qsdc/quantum_core.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {

inline constexpr int kThetaMin = 1;
inline constexpr int kThetaMax = 360;

enum class Role : std::uint8_t { Message, Check, AuthA, AuthB, Theta, Decoy };
std::string_view to_string(Role role);

/// Z = {|0>,|1>} (0 degrees), X = {|+>,|->} (45 degrees).
enum class BasisChoice : std::uint8_t { Z, X };
std::string_view to_string(BasisChoice basis);
BasisChoice basis_choice_from_string(std::string_view name);
const Basis& basis_of(BasisChoice choice);

/// |0>, |1>, |+> or |->.
Qubit bb84_state(BasisChoice basis, bool bit);

// ---------------------------------------------------------------------------
// Configuration

struct ProtocolConfig {
    std::size_t n = 6;  // message bits
    std::size_t c = 2;  // check bits
    std::size_t k = 4;  // identity bits (even)
    std::size_t m = 4;  // decoy photons
    int N = kThetaMax;  // |Theta|
    double decoy_error_threshold = 0.0;
    double auth_error_threshold = 0.0;
    double check_bit_error_threshold = 0.0;
    std::uint64_t seed = 0;

    void validate() const;

    /// Largest theta whose binary form fits in the k identity bits (k >= k').
    int max_theta() const;

    friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

struct PartyIdentities {
    BitString id_a;
    BitString id_b;

    void validate(const ProtocolConfig& config) const;
    friend bool operator==(const PartyIdentities&, const PartyIdentities&) = default;
};

// ---------------------------------------------------------------------------
// Sequence layout

struct SequenceLayout {
    std::vector<Role> role_of;
    std::vector<std::size_t> ordinal_of;

    std::size_t size() const { return role_of.size(); }
    std::size_t count(Role role) const;
    /// Positions holding `role`, ascending (equivalently, in preparation order).
    std::vector<std::size_t> positions_of(Role role) const;

    friend bool operator==(const SequenceLayout&, const SequenceLayout&) = default;
};

/// l = (n + c) + 3k/2 + k' + m.
std::size_t sequence_length(std::size_t n, std::size_t c, std::size_t k, std::size_t k_prime, std::size_t m);

// ---------------------------------------------------------------------------
// Classical channel

enum class Party : std::uint8_t { Alice, Bob };
enum class Stage : std::uint8_t { SecurityCheck, AuthA, AuthB, Decode, Integrity };
std::string_view to_string(Party party);
std::string_view to_string(Stage stage);

struct DecoyReveal {
    std::vector<std::size_t> positions;
    std::vector<BasisChoice> bases;
    friend bool operator==(const DecoyReveal&, const DecoyReveal&) = default;
};
/// One outcome per transmitted decoy copy, ordered by decoy then copy.
struct DecoyResults {
    BitString outcomes;
    friend bool operator==(const DecoyResults&, const DecoyResults&) = default;
};
struct AuthAPositions {
    std::vector<std::size_t> positions;
    friend bool operator==(const AuthAPositions&, const AuthAPositions&) = default;
};
/// Bob's verdict on Alice's identity.
struct AuthAVerdict {
    bool accepted = false;
    friend bool operator==(const AuthAVerdict&, const AuthAVerdict&) = default;
};
struct AuthBPositions {
    std::vector<std::size_t> positions;
    friend bool operator==(const AuthBPositions&, const AuthBPositions&) = default;
};
struct RAnnouncement {
    BitString r;
    friend bool operator==(const RAnnouncement&, const RAnnouncement&) = default;
};
struct ThetaPositions {
    std::vector<std::size_t> positions;
    friend bool operator==(const ThetaPositions&, const ThetaPositions&) = default;
};
struct CheckReveal {
    std::vector<std::size_t> positions;
    BitString values;
    friend bool operator==(const CheckReveal&, const CheckReveal&) = default;
};
struct Abort {
    Stage stage = Stage::SecurityCheck;
    std::string reason;
    friend bool operator==(const Abort&, const Abort&) = default;
};

using ClassicalMessage = std::variant<DecoyReveal, DecoyResults, AuthAPositions, AuthAVerdict, AuthBPositions,
                                      RAnnouncement, ThetaPositions, CheckReveal, Abort>;

struct TranscriptEntry {
    Party sender = Party::Alice;
    ClassicalMessage message;
    friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

using Transcript = std::vector<TranscriptEntry>;

// ---------------------------------------------------------------------------
// Outcome

enum class SessionStatus : std::uint8_t {
    Delivered,
    AbortedSecurityCheck,
    AbortedAuthA,
    AbortedAuthB,
    AbortedIntegrity,
};
std::string_view to_string(SessionStatus status);

struct SessionOutcome {
    SessionStatus status = SessionStatus::AbortedSecurityCheck;
    std::optional<BitString> recovered_message;
    /// Bob's decoded M' (message with check bits) once decoding ran.
    std::optional<BitString> decoded_augmented;
    double decoy_error_rate = 0.0;
    double auth_a_error_rate = 0.0;
    bool r_match = false;
    double check_bit_error_rate = 0.0;
    Transcript transcript;

    friend bool operator==(const SessionOutcome&, const SessionOutcome&) = default;
};

// ---------------------------------------------------------------------------
// Alice: preparation

struct CheckInsertion {
    BitString augmented;                       // M'
    std::vector<std::size_t> check_positions;  // indices into M', ascending
    BitString check_values;
};

/// Inserts c uniformly placed random check bits.
CheckInsertion insert_check_bits(const BitString& message, std::size_t c, Rng& rng);
/// Inserts check bits at the given M' indices.
CheckInsertion insert_check_bits(const BitString& message, std::vector<std::size_t> positions,
                                 const BitString& values);

/// Qubit i = U_(theta + offset)|bit_i>.
std::vector<Qubit> encode_message_qubits(const BitString& augmented, int theta, double calibration_offset_deg = 0.0);

/// Bit pairs 00, 01, 10, 11 -> |0>, |1>, |+>, |->.
std::vector<Qubit> encode_identity_a(const BitString& id_a);

/// Qubit i encodes bit i of Id_B ^ r in the basis selected by Id_B_i.
std::vector<Qubit> encode_identity_b(const BitString& id_b, const BitString& r);

/// Minimal-width binary form of theta.
BitString theta_bits(int theta);

/// Qubit i encodes theta bit i in the basis selected by Id_B_i.
std::vector<Qubit> encode_theta(int theta, const BitString& id_b);

struct DecoyDescriptor {
    BasisChoice basis = BasisChoice::Z;
    bool bit = false;
    friend bool operator==(const DecoyDescriptor&, const DecoyDescriptor&) = default;
};

struct DecoyBatch {
    std::vector<Qubit> states;
    std::vector<DecoyDescriptor> descriptors;
};

DecoyBatch sample_decoys(std::size_t m, Rng& rng);
DecoyBatch prepare_decoys(std::vector<DecoyDescriptor> descriptors);

struct SequenceParts {
    std::vector<Qubit> message;                // encoded M' in order
    std::vector<std::size_t> check_positions;  // which entries of `message` are check bits
    std::vector<Qubit> auth_a;
    std::vector<Qubit> auth_b;
    std::vector<Qubit> theta;
    std::vector<Qubit> decoys;
};

/// Final 0-based positions of each inserted group inside the sequence it is
/// inserted into (I_A in Q2, I_B in Q3, Q_theta in Q4, decoys in Q5).
struct InsertionPlan {
    std::vector<std::size_t> auth_a;
    std::vector<std::size_t> auth_b;
    std::vector<std::size_t> theta;
    std::vector<std::size_t> decoys;
};

struct AssembledSequence {
    std::vector<Qubit> qubits;
    SequenceLayout layout;
};

/// Inserts I_A, I_B, Q_theta and the decoys, in that order, at uniformly random
/// positions.
AssembledSequence assemble_sequence(const SequenceParts& parts, Rng& rng);
AssembledSequence assemble_sequence(const SequenceParts& parts, const InsertionPlan& plan);

/// Session choices normally drawn from Alice's random stream. Any field left
/// empty is drawn.
struct PreparationOverrides {
    std::optional<int> theta;
    std::optional<BitString> r;
    std::optional<std::vector<std::size_t>> check_positions;
    std::optional<BitString> check_values;
    std::optional<std::vector<DecoyDescriptor>> decoys;
    std::optional<InsertionPlan> insertion;
};

/// Everything Alice knows once the sequence is prepared.
struct AlicePreparation {
    PartyIdentities identities;
    CheckInsertion checks;
    int theta = kThetaMin;
    BitString r;
    std::vector<DecoyDescriptor> decoys;
    AssembledSequence sequence;
};

/// theta uniform over {1, ..., config.max_theta()}.
int draw_theta(const ProtocolConfig& config, Rng& rng);

AlicePreparation prepare_alice(const ProtocolConfig& config, const PartyIdentities& identities,
                               const BitString& message, Rng& rng, const PreparationOverrides& overrides = {},
                               double calibration_offset_deg = 0.0);

// ---------------------------------------------------------------------------
// Bob: the received sequence and his measurements

/// The qubits in Bob's hands. Each logical position may be carried by several
/// physical copies under a repetition code; every physical measurement passes
/// through the readout-error model.
class ReceivedSequence {
  public:
    ReceivedSequence(std::vector<Qubit> physical, RepetitionLayout layout, double readout_error = 0.0);

    std::size_t logical_length() const { return layout_.logical_length; }
    int copies() const { return layout_.distance; }

    /// Outcome of every copy of logical position `pos` measured in `basis`.
    BitString measure_copies(std::size_t pos, const Basis& basis, Rng& rng);
    /// Majority over the copies.
    bool measure_logical(std::size_t pos, const Basis& basis, Rng& rng);
    /// Applies `gate` to every copy, then measures in the computational basis;
    /// majority over the copies.
    bool rotate_and_measure_logical(std::size_t pos, const Gate& gate, Rng& rng);

  private:
    std::vector<Qubit> physical_;
    RepetitionLayout layout_;
    double readout_error_;
};

struct SecurityCheckResult {
    double error_rate = 0.0;
    bool pass = false;
    DecoyResults results;
};

/// Bob measures the announced decoys; Alice compares with what she prepared.
SecurityCheckResult run_security_check(ReceivedSequence& received, const DecoyReveal& reveal,
                                       std::span<const DecoyDescriptor> prepared, double threshold, Rng& rng);

struct AuthAResult {
    double error_rate = 0.0;
    bool pass = false;
};

/// Bob measures I_A in the bases fixed by the first bit of each Id_A pair and
/// compares with the second bit.
AuthAResult authenticate_alice(ReceivedSequence& received, const BitString& id_a,
                               std::span<const std::size_t> positions, double threshold, Rng& rng);

/// Bob's side of the r exchange: recovers Id_B^1 and returns r = Id_B ^ Id_B^1.
BitString announce_r(ReceivedSequence& received, const BitString& id_b, std::span<const std::size_t> positions,
                     Rng& rng);

struct AuthBResult {
    BitString recovered_r;
    bool r_match = false;
};

AuthBResult authenticate_bob(ReceivedSequence& received, const BitString& id_b,
                             std::span<const std::size_t> positions, const BitString& alice_r, Rng& rng);

struct DecodeResult {
    std::optional<int> theta;                    // empty when the bits decode outside Theta
    BitString augmented;                         // M'
    std::vector<std::size_t> message_positions;  // sequence position of each bit of M'
};

/// Recovers theta from the announced Q_theta positions and decodes every
/// position not yet announced.
DecodeResult decode_message(ReceivedSequence& received, std::span<const std::size_t> theta_positions,
                            std::span<const std::size_t> announced_positions, const BitString& id_b, Rng& rng);

struct IntegrityResult {
    double error_rate = 0.0;
    BitString message;
    bool pass = false;
};

/// Compares the check bits at `check_indices` of M' and strips them.
IntegrityResult verify_integrity(const BitString& augmented, std::span<const std::size_t> check_indices,
                                 const BitString& check_values, double threshold);

// ---------------------------------------------------------------------------
// Sessions

/// Action of the quantum channel (eavesdropper and/or noise) on the physical
/// sequence in flight.
using ChannelTransform = std::function<void(std::vector<Qubit>& flying, Rng& rng)>;

struct SessionOptions {
    PreparationOverrides overrides;
    double calibration_offset_deg = 0.0;
    double readout_error = 0.0;
    std::optional<RepetitionCode> repetition;
    bool interleave_copies = false;
};

/// Independent random streams of one session.
struct SessionStreams {
    Rng alice;
    Rng bob;
    Rng channel;

    static SessionStreams from_seed(std::uint64_t seed);
};

RepetitionLayout repetition_layout(std::size_t logical_length, const SessionOptions& options);

/// Steps 2-4 given Alice's preparation and what reached Bob.
SessionOutcome complete_session(const ProtocolConfig& config, const PartyIdentities& receiver_identities,
                                const AlicePreparation& alice, ReceivedSequence received, Rng& bob_rng);

/// A full session: Alice prepares, the channel acts, Bob runs steps 2-4.
/// Deterministic in config.seed.
SessionOutcome run_session(const ProtocolConfig& config, const PartyIdentities& identities,
                           const BitString& message, const ChannelTransform& channel = {},
                           const SessionOptions& options = {});

}  // namespace qsdc

#endif  // QSDC_PROTOCOL_HPP
