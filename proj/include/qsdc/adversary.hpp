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

// Eavesdropper strategies. Channel attacks act on the flying qubits between
// Alice and Bob; impersonation attacks replace one of the parties. Each
// attack also comes with the analytic values it is checked against.

#ifndef QSDC_ADVERSARY_HPP
#define QSDC_ADVERSARY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "qsdc/bit_string.hpp"
#include "qsdc/noise.hpp"
#include "qsdc/protocol.hpp"
#include "qsdc/quantum_core.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {

// ---------------------------------------------------------------------------
// Attack models

struct NoAttack {
    friend bool operator==(const NoAttack&, const NoAttack&) = default;
};
struct ImpersonateAlice {
    friend bool operator==(const ImpersonateAlice&, const ImpersonateAlice&) = default;
};
struct ImpersonateBob {
    friend bool operator==(const ImpersonateBob&, const ImpersonateBob&) = default;
};
/// Measure everything in the basis at `theta0` degrees and resend. Empty
/// theta0 means a fresh uniform draw from {1, ..., 360} per session.
struct InterceptResend {
    std::optional<double> theta0;
    friend bool operator==(const InterceptResend&, const InterceptResend&) = default;
};
/// Entangle every qubit with a private four-level probe.
struct EntangleMeasure {
    double fidelity = 1.0;
    friend bool operator==(const EntangleMeasure&, const EntangleMeasure&) = default;
};
/// Leave each qubit alone or corrupt it, with probability 1/2 each.
/// Corruption applies I, X, iY, Z with probabilities w_1^2 ... w_4^2.
struct DenialOfService {
    std::array<double, 4> weights{1.0, 0.0, 0.0, 0.0};
    friend bool operator==(const DenialOfService&, const DenialOfService&) = default;
};
/// Keep the real sequence, forward uniformly random BB84 states instead.
struct ManInTheMiddle {
    friend bool operator==(const ManInTheMiddle&, const ManInTheMiddle&) = default;
};

using AttackModel = std::variant<NoAttack, ImpersonateAlice, ImpersonateBob, InterceptResend, EntangleMeasure,
                                 DenialOfService, ManInTheMiddle>;

/// "none", "impersonate_alice", "impersonate_bob", "intercept_resend",
/// "entangle", "dos" or "mitm".
std::string_view attack_name(const AttackModel& attack);
/// Default-parameter model for a name accepted by attack_name.
AttackModel attack_from_name(std::string_view name);

void validate_attack(const AttackModel& attack);

// ---------------------------------------------------------------------------
// What Eve keeps

struct EveRecord {
    /// Eve's outcome per physical position, where she measured.
    std::vector<std::optional<int>> measured_outcomes;
    /// Reduced probe state per physical position (entangling attack).
    std::vector<std::optional<Density>> ancilla_states;
    std::optional<BitString> guessed_message;
    std::optional<BitString> guessed_id_b1;
    /// The genuine sequence Eve withheld from Bob (man in the middle).
    std::vector<Qubit> intercepted;
};

struct AttackResult {
    std::vector<Qubit> sequence;
    EveRecord record;
};

// ---------------------------------------------------------------------------
// Intercept and resend

AttackResult intercept_resend(const std::vector<Qubit>& sequence, double theta0, Rng& rng);

/// 1 - (3/4)^m.
double detection_prob_intercept(std::size_t m);

/// Probability that one uniformly drawn decoy survives Eve's measurement at
/// theta0 and Bob's check, by chaining Born-rule distributions.
double intercept_decoy_survival(double theta0);

struct PCorrBound {
    double exact = 0.0;        // 1 / (N C(l, n)); may underflow for huge l
    double log2_exact = 0.0;   // log2 of the same, always finite
    bool condition = false;    // l >= 2n (1/2)^(8/n)
    bool below_half_pow = false;  // exact <= (1/2)^n
    /// condition implies below_half_pow.
    bool bound_holds() const { return !condition || below_half_pow; }
};

/// Probability of guessing theta and the message positions at once.
/// Comparisons are carried out in exact integer arithmetic.
PCorrBound p_corr_bound(std::uint64_t N, std::uint64_t l, std::uint64_t n);

/// C(l, n) >= (l / n)^n, exactly.
bool binomial_power_bound(std::uint64_t l, std::uint64_t n);

// ---------------------------------------------------------------------------
// Entangle and measure

/// The 8x8 probe interaction: |0>e0 -> sqrt(F)|0>e0 + sqrt(1-F)|1>e1 and
/// |1>e0 -> sqrt(1-F)|0>e2 + sqrt(F)|1>e3, completed to a unitary.
Gate entangling_unitary(double fidelity);

/// The joint state after Eve's probe (starting in e0) touches `qubit`.
Qubit entangle_attach(const Qubit& qubit, double fidelity);

AttackResult entangle_sequence(const std::vector<Qubit>& sequence, double fidelity);

/// (F + 1/2) / 2.
double entangle_decoy_pass_prob(double fidelity);

/// The same quantity evaluated from the joint states.
double entangle_decoy_pass_analytic(double fidelity);

/// Trace distance between Eve's probe states for the two message states
/// U_theta|0> and U_theta|1>.
double eve_message_distinguishability(double theta_deg, double fidelity);

// ---------------------------------------------------------------------------
// Denial of service

using PauliWeights = std::array<double, 4>;

void validate_weights(const PauliWeights& w);

/// w1 I + w2 X + w3 iY + w4 Z. Throws unless the combination is unitary.
Gate dos_unitary(const PauliWeights& w);

AttackResult dos_apply(const std::vector<Qubit>& sequence, const PauliWeights& w, Rng& rng);

/// w1^2 + (w2^2 + w4^2)/2: decoy pass probability given the corrupt branch.
double dos_pass_given_attack(const PauliWeights& w);
/// (1 + p') / 2.
double dos_pass_prob(const PauliWeights& w);

/// Decoy pass given the corrupt branch, by averaging over the four decoy
/// states and the Pauli mixture.
double dos_pass_given_attack_analytic(const PauliWeights& w);

/// Decoy pass of the coherent operator dos_unitary(w), averaged over decoys.
double dos_coherent_pass_analytic(const PauliWeights& w);

// ---------------------------------------------------------------------------
// Man in the middle

AttackResult mitm_replace(const std::vector<Qubit>& sequence, Rng& rng);

/// 1 - 2^-m.
double detection_prob_mitm(std::size_t m);

/// Per-decoy pass probability, averaged over decoys and replacements.
double mitm_decoy_pass_analytic();

// ---------------------------------------------------------------------------
// Impersonation

/// 1 - (1/2)^(k/2).
double detection_prob_impersonate_alice(std::size_t k);
/// (1/2)^k.
double acceptance_prob_impersonate_bob(std::size_t k);
/// (3/4)^k.
double id_b1_guess_prob(std::size_t k);

// ---------------------------------------------------------------------------
// Attacked sessions

struct AttackedSession {
    SessionOutcome outcome;
    EveRecord eve;
    BitString true_id_b1;  // Id_B ^ r of the genuine Alice (empty when Alice was impersonated)
};

/// The channel action of a channel attack, filling `record` when invoked;
/// empty for no attack. Throws for impersonation models.
ChannelTransform make_attack_transform(const AttackModel& attack, EveRecord& record);

/// A complete session under `attack`, followed by `noise` on every flying
/// qubit. Deterministic in config.seed.
AttackedSession run_attacked_session(const ProtocolConfig& config, const PartyIdentities& identities,
                                     const BitString& message, const AttackModel& attack,
                                     const ChannelModel& noise = ChannelModel::ideal(),
                                     const SessionOptions& options = {});

/// Eve plays Alice with identities and message of her own choosing.
AttackedSession impersonate_alice_session(const ProtocolConfig& config, const PartyIdentities& identities,
                                          const ChannelModel& noise = ChannelModel::ideal(),
                                          const SessionOptions& options = {});

/// Eve intercepts Alice's sequence and plays Bob.
AttackedSession impersonate_bob_session(const ProtocolConfig& config, const PartyIdentities& identities,
                                        const BitString& message, const ChannelModel& noise = ChannelModel::ideal(),
                                        const SessionOptions& options = {});

}  // namespace qsdc

#endif  // QSDC_ADVERSARY_HPP
