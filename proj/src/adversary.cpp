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

#include "qsdc/adversary.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace qsdc {

namespace {

namespace mp = boost::multiprecision;

constexpr std::uint64_t kEveStream = 4;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct Decoy {
    BasisChoice basis;
    bool bit;
};
constexpr Decoy kDecoys[4] = {
    {BasisChoice::Z, false}, {BasisChoice::Z, true}, {BasisChoice::X, false}, {BasisChoice::X, true}};

double pass_probability(const Qubit& arriving, const Decoy& d) {
    return leading_qubit_distribution(arriving, basis_of(d.basis))[d.bit ? 1 : 0];
}

const Gate& pauli(std::size_t i) {
    static const Gate ops[4] = {Gate::identity(2), pauli_x(), pauli_iy(), pauli_z()};
    return ops[i];
}

mp::cpp_int binomial(std::uint64_t l, std::uint64_t n) {
    if (n > l - n) n = l - n;
    mp::cpp_int c = 1;
    for (std::uint64_t i = 1; i <= n; ++i) {
        c *= l - n + i;
        c /= i;
    }
    return c;
}

void apply_noise(std::vector<Qubit>& flying, const ChannelModel& noise, Rng& rng) {
    if (noise.n_gates == 0 || noise.device.gate_error == 0.0) return;
    for (auto& q : flying) q = apply_channel(q, noise, rng);
}

// Steps shared by every session whose quantum sequence Alice prepares.
struct Flight {
    SessionStreams streams;
    Rng eve;
    AlicePreparation alice;
    RepetitionLayout layout;
    std::vector<Qubit> flying;
};

Flight launch(const ProtocolConfig& config, const PartyIdentities& sender, const BitString& message,
              bool alice_is_eve, const SessionOptions& options) {
    Flight f{SessionStreams::from_seed(config.seed), Rng(derive_seed(config.seed, kEveStream)), {}, {}, {}};
    Rng& source = alice_is_eve ? f.eve : f.streams.alice;
    const PreparationOverrides& overrides = alice_is_eve ? PreparationOverrides{} : options.overrides;
    f.alice = prepare_alice(config, sender, message, source, overrides, options.calibration_offset_deg);
    f.layout = repetition_layout(f.alice.sequence.qubits.size(), options);
    f.flying = f.layout.expand(f.alice.sequence.qubits);
    return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// Attack models

std::string_view attack_name(const AttackModel& attack) {
    return std::visit(Overloaded{
                          [](const NoAttack&) { return std::string_view("none"); },
                          [](const ImpersonateAlice&) { return std::string_view("impersonate_alice"); },
                          [](const ImpersonateBob&) { return std::string_view("impersonate_bob"); },
                          [](const InterceptResend&) { return std::string_view("intercept_resend"); },
                          [](const EntangleMeasure&) { return std::string_view("entangle"); },
                          [](const DenialOfService&) { return std::string_view("dos"); },
                          [](const ManInTheMiddle&) { return std::string_view("mitm"); },
                      },
                      attack);
}

AttackModel attack_from_name(std::string_view name) {
    if (name == "none") return NoAttack{};
    if (name == "impersonate_alice") return ImpersonateAlice{};
    if (name == "impersonate_bob") return ImpersonateBob{};
    if (name == "intercept_resend") return InterceptResend{};
    if (name == "entangle") return EntangleMeasure{};
    if (name == "dos") return DenialOfService{};
    if (name == "mitm") return ManInTheMiddle{};
    throw std::invalid_argument("unknown attack model: " + std::string(name));
}

void validate_attack(const AttackModel& attack) {
    if (const auto* a = std::get_if<InterceptResend>(&attack)) {
        if (a->theta0 && !std::isfinite(*a->theta0)) throw std::invalid_argument("theta0 must be finite");
    } else if (const auto* e = std::get_if<EntangleMeasure>(&attack)) {
        if (!(e->fidelity >= 0.0 && e->fidelity <= 1.0)) throw std::invalid_argument("fidelity must be in [0, 1]");
    } else if (const auto* d = std::get_if<DenialOfService>(&attack)) {
        validate_weights(d->weights);
    }
}

// ---------------------------------------------------------------------------
// Intercept and resend

AttackResult intercept_resend(const std::vector<Qubit>& sequence, double theta0, Rng& rng) {
    const Basis basis(theta0);
    AttackResult out;
    out.sequence.reserve(sequence.size());
    out.record.measured_outcomes.reserve(sequence.size());
    for (const auto& q : sequence) {
        const auto r = measure_leading_qubit(q, basis, rng);
        out.record.measured_outcomes.emplace_back(r.outcome);
        out.sequence.push_back(basis.vector(r.outcome));
    }
    return out;
}

double detection_prob_intercept(std::size_t m) { return 1.0 - std::pow(0.75, static_cast<double>(m)); }

double intercept_decoy_survival(double theta0) {
    const Basis eve(theta0);
    double total = 0.0;
    for (const auto& d : kDecoys) {
        const auto p = outcome_distribution(bb84_state(d.basis, d.bit), eve);
        for (int e = 0; e < 2; ++e) total += p[e] * pass_probability(eve.vector(e), d);
    }
    return total / 4.0;
}

PCorrBound p_corr_bound(std::uint64_t N, std::uint64_t l, std::uint64_t n) {
    if (N < 1 || n < 1 || n > l) throw std::invalid_argument("p_corr_bound needs N >= 1 and 1 <= n <= l");
    const mp::cpp_int denom = mp::cpp_int(N) * binomial(l, n);
    const mp::cpp_bin_float_50 d(denom);
    PCorrBound out;
    out.exact = static_cast<double>(mp::cpp_bin_float_50(1) / d);
    out.log2_exact = -static_cast<double>(mp::log(d) / mp::log(mp::cpp_bin_float_50(2)));
    const auto ni = static_cast<unsigned>(n);
    // l >= 2n 2^(-8/n)  <=>  256 l^n >= (2n)^n
    out.condition = 256 * mp::pow(mp::cpp_int(l), ni) >= mp::pow(mp::cpp_int(2 * n), ni);
    out.below_half_pow = denom >= (mp::cpp_int(1) << ni);
    return out;
}

bool binomial_power_bound(std::uint64_t l, std::uint64_t n) {
    if (n < 1 || n > l) throw std::invalid_argument("binomial_power_bound needs 1 <= n <= l");
    const auto ni = static_cast<unsigned>(n);
    return binomial(l, n) * mp::pow(mp::cpp_int(n), ni) >= mp::pow(mp::cpp_int(l), ni);
}

// ---------------------------------------------------------------------------
// Entangle and measure

Gate entangling_unitary(double fidelity) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw std::invalid_argument("fidelity must be in [0, 1]");
    using Matrix = Gate::Matrix;
    using Vector = Qubit::Vector;
    const double f = std::sqrt(fidelity);
    const double d = std::sqrt(1.0 - fidelity);
    Matrix u = Matrix::Zero(8, 8);
    u(0, 0) = f;
    u(5, 0) = d;
    u(2, 4) = d;
    u(7, 4) = f;

    std::vector<int> filled = {0, 4};
    const int free_cols[] = {1, 2, 3, 5, 6, 7};
    int next = 0;
    for (int j = 0; j < 8 && next < 6; ++j) {
        Vector v = Vector::Zero(8);
        v(j) = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (int c : filled) v -= u.col(c).dot(v) * u.col(c);
        }
        if (v.norm() < 1e-8) continue;
        const int col = free_cols[next++];
        u.col(col) = v / v.norm();
        filled.push_back(col);
    }
    return Gate(u);
}

Qubit entangle_attach(const Qubit& qubit, double fidelity) {
    if (qubit.dim() != 2) throw std::invalid_argument("entangle_attach expects a single qubit");
    static const Qubit probe = Qubit::basis_state(4, 0);
    return apply(entangling_unitary(fidelity), tensor(qubit, probe));
}

AttackResult entangle_sequence(const std::vector<Qubit>& sequence, double fidelity) {
    const Gate u = entangling_unitary(fidelity);
    const Qubit probe = Qubit::basis_state(4, 0);
    AttackResult out;
    out.sequence.reserve(sequence.size());
    out.record.ancilla_states.reserve(sequence.size());
    for (const auto& q : sequence) {
        if (q.dim() != 2) throw std::invalid_argument("entangling attack expects single qubits in flight");
        Qubit joint = apply(u, tensor(q, probe));
        out.record.ancilla_states.emplace_back(reduced_density(joint, Subsystem::Ancilla));
        out.sequence.push_back(std::move(joint));
    }
    return out;
}

double entangle_decoy_pass_prob(double fidelity) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw std::invalid_argument("fidelity must be in [0, 1]");
    return (fidelity + 0.5) / 2.0;
}

double entangle_decoy_pass_analytic(double fidelity) {
    double total = 0.0;
    for (const auto& d : kDecoys) total += pass_probability(entangle_attach(bb84_state(d.basis, d.bit), fidelity), d);
    return total / 4.0;
}

double eve_message_distinguishability(double theta_deg, double fidelity) {
    const Gate u = rotation_gate(theta_deg);
    const auto rx = reduced_density(entangle_attach(apply(u, ket0()), fidelity), Subsystem::Ancilla);
    const auto ry = reduced_density(entangle_attach(apply(u, ket1()), fidelity), Subsystem::Ancilla);
    return trace_distance(rx, ry);
}

// ---------------------------------------------------------------------------
// Denial of service

void validate_weights(const PauliWeights& w) {
    double total = 0.0;
    for (double x : w) {
        if (!std::isfinite(x)) throw std::invalid_argument("Pauli weights must be finite");
        total += x * x;
    }
    if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("Pauli weights must satisfy sum w_i^2 = 1");
}

Gate dos_unitary(const PauliWeights& w) {
    validate_weights(w);
    Gate::Matrix m = Gate::Matrix::Zero(2, 2);
    for (std::size_t i = 0; i < 4; ++i) m += w[i] * pauli(i).matrix();
    return Gate(m);
}

AttackResult dos_apply(const std::vector<Qubit>& sequence, const PauliWeights& w, Rng& rng) {
    validate_weights(w);
    AttackResult out;
    out.sequence.reserve(sequence.size());
    for (const auto& q : sequence) {
        if (!rng.bernoulli(0.5)) {
            out.sequence.push_back(q);
            continue;
        }
        const double u = rng.uniform();
        double acc = 0.0;
        std::size_t which = 3;
        for (std::size_t i = 0; i < 4; ++i) {
            acc += w[i] * w[i];
            if (u < acc) {
                which = i;
                break;
            }
        }
        out.sequence.push_back(which == 0 ? q : apply_on_qubit(pauli(which), q));
    }
    return out;
}

double dos_pass_given_attack(const PauliWeights& w) {
    validate_weights(w);
    return w[0] * w[0] + (w[1] * w[1] + w[3] * w[3]) / 2.0;
}

double dos_pass_prob(const PauliWeights& w) { return (1.0 + dos_pass_given_attack(w)) / 2.0; }

double dos_pass_given_attack_analytic(const PauliWeights& w) {
    validate_weights(w);
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double pass = 0.0;
        for (const auto& d : kDecoys) pass += pass_probability(apply(pauli(i), bb84_state(d.basis, d.bit)), d);
        total += w[i] * w[i] * pass / 4.0;
    }
    return total;
}

double dos_coherent_pass_analytic(const PauliWeights& w) {
    const Gate u = dos_unitary(w);
    double total = 0.0;
    for (const auto& d : kDecoys) total += pass_probability(apply(u, bb84_state(d.basis, d.bit)), d);
    return total / 4.0;
}

// ---------------------------------------------------------------------------
// Man in the middle

AttackResult mitm_replace(const std::vector<Qubit>& sequence, Rng& rng) {
    AttackResult out;
    out.record.intercepted = sequence;
    out.sequence.reserve(sequence.size());
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        const auto& d = kDecoys[rng.below(4)];
        out.sequence.push_back(bb84_state(d.basis, d.bit));
    }
    return out;
}

double detection_prob_mitm(std::size_t m) { return 1.0 - std::pow(0.5, static_cast<double>(m)); }

double mitm_decoy_pass_analytic() {
    double total = 0.0;
    for (const auto& d : kDecoys) {
        for (const auto& r : kDecoys) total += pass_probability(bb84_state(r.basis, r.bit), d);
    }
    return total / 16.0;
}

// ---------------------------------------------------------------------------
// Impersonation

double detection_prob_impersonate_alice(std::size_t k) {
    return 1.0 - std::pow(0.5, static_cast<double>(k) / 2.0);
}

double acceptance_prob_impersonate_bob(std::size_t k) { return std::pow(0.5, static_cast<double>(k)); }

double id_b1_guess_prob(std::size_t k) { return std::pow(0.75, static_cast<double>(k)); }

// ---------------------------------------------------------------------------
// Attacked sessions

ChannelTransform make_attack_transform(const AttackModel& attack, EveRecord& record) {
    validate_attack(attack);
    auto keep = [&record](AttackResult&& r, std::vector<Qubit>& flying) {
        flying = std::move(r.sequence);
        record = std::move(r.record);
    };
    return std::visit(
        Overloaded{
            [](const NoAttack&) -> ChannelTransform { return {}; },
            [](const ImpersonateAlice&) -> ChannelTransform {
                throw std::invalid_argument("impersonation is not a channel attack");
            },
            [](const ImpersonateBob&) -> ChannelTransform {
                throw std::invalid_argument("impersonation is not a channel attack");
            },
            [keep](const InterceptResend& a) -> ChannelTransform {
                return [keep, a](std::vector<Qubit>& flying, Rng& rng) {
                    const double theta0 = a.theta0 ? *a.theta0 : static_cast<double>(kThetaMin + rng.below(kThetaMax));
                    keep(intercept_resend(flying, theta0, rng), flying);
                };
            },
            [keep](const EntangleMeasure& a) -> ChannelTransform {
                return [keep, a](std::vector<Qubit>& flying, Rng&) { keep(entangle_sequence(flying, a.fidelity), flying); };
            },
            [keep](const DenialOfService& a) -> ChannelTransform {
                return [keep, a](std::vector<Qubit>& flying, Rng& rng) { keep(dos_apply(flying, a.weights, rng), flying); };
            },
            [keep](const ManInTheMiddle&) -> ChannelTransform {
                return [keep](std::vector<Qubit>& flying, Rng& rng) { keep(mitm_replace(flying, rng), flying); };
            },
        },
        attack);
}

AttackedSession run_attacked_session(const ProtocolConfig& config, const PartyIdentities& identities,
                                     const BitString& message, const AttackModel& attack, const ChannelModel& noise,
                                     const SessionOptions& options) {
    if (std::holds_alternative<ImpersonateAlice>(attack)) {
        return impersonate_alice_session(config, identities, noise, options);
    }
    if (std::holds_alternative<ImpersonateBob>(attack)) {
        return impersonate_bob_session(config, identities, message, noise, options);
    }
    noise.validate();
    Flight f = launch(config, identities, message, false, options);
    AttackedSession out;
    out.true_id_b1 = identities.id_b ^ f.alice.r;
    if (const auto transform = make_attack_transform(attack, out.eve)) transform(f.flying, f.eve);
    apply_noise(f.flying, noise, f.streams.channel);
    ReceivedSequence received(std::move(f.flying), f.layout, options.readout_error);
    out.outcome = complete_session(config, identities, f.alice, std::move(received), f.streams.bob);
    return out;
}

AttackedSession impersonate_alice_session(const ProtocolConfig& config, const PartyIdentities& identities,
                                          const ChannelModel& noise, const SessionOptions& options) {
    config.validate();
    identities.validate(config);
    noise.validate();
    Rng eve(derive_seed(config.seed, kEveStream));
    PartyIdentities forged{BitString::random(config.k, eve), BitString::random(config.k, eve)};
    const BitString message = BitString::random(config.n, eve);

    Flight f = launch(config, forged, message, true, options);
    AttackedSession out;
    apply_noise(f.flying, noise, f.streams.channel);
    ReceivedSequence received(std::move(f.flying), f.layout, options.readout_error);
    out.outcome = complete_session(config, identities, f.alice, std::move(received), f.streams.bob);
    return out;
}

AttackedSession impersonate_bob_session(const ProtocolConfig& config, const PartyIdentities& identities,
                                        const BitString& message, const ChannelModel& noise,
                                        const SessionOptions& options) {
    noise.validate();
    Flight f = launch(config, identities, message, false, options);
    apply_noise(f.flying, noise, f.streams.channel);
    ReceivedSequence received(std::move(f.flying), f.layout, options.readout_error);
    const SequenceLayout& layout = f.alice.sequence.layout;
    Rng& eve = f.eve;

    AttackedSession result;
    result.true_id_b1 = identities.id_b ^ f.alice.r;
    SessionOutcome& out = result.outcome;
    auto say = [&out](Party who, ClassicalMessage msg) { out.transcript.push_back({who, std::move(msg)}); };

    // Eve measures the decoys honestly once their bases are public.
    DecoyReveal reveal;
    reveal.positions = layout.positions_of(Role::Decoy);
    for (const auto& d : f.alice.decoys) reveal.bases.push_back(d.basis);
    say(Party::Alice, reveal);
    const auto check = run_security_check(received, reveal, f.alice.decoys, config.decoy_error_threshold, eve);
    say(Party::Bob, check.results);
    out.decoy_error_rate = check.error_rate;
    if (!check.pass) {
        say(Party::Alice, Abort{Stage::SecurityCheck, "decoy error rate above threshold"});
        out.status = SessionStatus::AbortedSecurityCheck;
        return result;
    }

    const auto auth_a_positions = layout.positions_of(Role::AuthA);
    say(Party::Alice, AuthAPositions{auth_a_positions});
    say(Party::Bob, AuthAVerdict{true});

    // Random-basis guess of Id_B^1; r itself is a pure guess.
    const auto auth_b_positions = layout.positions_of(Role::AuthB);
    say(Party::Alice, AuthBPositions{auth_b_positions});
    const BitString guessed_bases = BitString::random(config.k, eve);
    BitString guessed_id_b1(config.k);
    for (std::size_t i = 0; i < auth_b_positions.size(); ++i) {
        const auto basis = guessed_bases[i] ? BasisChoice::X : BasisChoice::Z;
        guessed_id_b1.set(i, received.measure_logical(auth_b_positions[i], basis_of(basis), eve));
    }
    result.eve.guessed_id_b1 = guessed_id_b1;
    const BitString r = BitString::random(config.k, eve);
    say(Party::Bob, RAnnouncement{r});
    out.r_match = r == f.alice.r;
    if (!out.r_match) {
        say(Party::Alice, Abort{Stage::AuthB, "announced r does not match"});
        out.status = SessionStatus::AbortedAuthB;
        return result;
    }

    const auto theta_positions = layout.positions_of(Role::Theta);
    say(Party::Alice, ThetaPositions{theta_positions});
    std::vector<std::size_t> announced = reveal.positions;
    announced.insert(announced.end(), auth_a_positions.begin(), auth_a_positions.end());
    announced.insert(announced.end(), auth_b_positions.begin(), auth_b_positions.end());
    const auto decoded = decode_message(received, theta_positions, announced, guessed_bases, eve);
    if (!decoded.theta) {
        say(Party::Bob, Abort{Stage::Decode, "decoded theta outside [1, 360]"});
        out.status = SessionStatus::AbortedIntegrity;
        return result;
    }
    out.decoded_augmented = decoded.augmented;

    CheckReveal reveal_checks;
    reveal_checks.positions = layout.positions_of(Role::Check);
    reveal_checks.values = f.alice.checks.check_values;
    say(Party::Alice, reveal_checks);
    std::vector<std::size_t> check_indices;
    for (auto p : reveal_checks.positions) {
        const auto it = std::find(decoded.message_positions.begin(), decoded.message_positions.end(), p);
        check_indices.push_back(static_cast<std::size_t>(it - decoded.message_positions.begin()));
    }
    const auto integrity =
        verify_integrity(decoded.augmented, check_indices, reveal_checks.values, config.check_bit_error_threshold);
    result.eve.guessed_message = integrity.message;
    out.check_bit_error_rate = integrity.error_rate;
    if (!integrity.pass) {
        say(Party::Bob, Abort{Stage::Integrity, "check bit error rate above threshold"});
        out.status = SessionStatus::AbortedIntegrity;
        return result;
    }
    out.status = SessionStatus::Delivered;
    out.recovered_message = integrity.message;
    return result;
}

}  // namespace qsdc
