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


#include <gtest/gtest.h>

#include <cmath>

#include "qsdc/adversary.hpp"

namespace qsdc {
namespace {

double sigma(double p, int n) { return std::sqrt(p * (1 - p) / n); }

TEST(AttackModelTest, NamesRoundTrip) {
    for (const char* name : {"none", "impersonate_alice", "impersonate_bob", "intercept_resend", "entangle", "dos",
                             "mitm"}) {
        EXPECT_EQ(attack_name(attack_from_name(name)), name);
    }
    EXPECT_THROW(attack_from_name("replay"), std::invalid_argument);
}

TEST(AttackModelTest, Validation) {
    EXPECT_THROW(validate_attack(EntangleMeasure{1.5}), std::invalid_argument);
    EXPECT_THROW(validate_attack(DenialOfService{{1.0, 1.0, 0.0, 0.0}}), std::invalid_argument);
    EXPECT_NO_THROW(validate_attack(DenialOfService{{0.5, 0.5, 0.5, 0.5}}));
}

TEST(InterceptTest, DecoySurvivalIsThreeQuartersForEveryAngle) {
    for (int theta0 = 0; theta0 < 360; ++theta0) {
        EXPECT_NEAR(intercept_decoy_survival(theta0), 0.75, 1e-10) << theta0;
    }
}

TEST(InterceptTest, DetectionClosedForm) {
    EXPECT_NEAR(detection_prob_intercept(8), 0.8998870849609375, 1e-15);
    EXPECT_NEAR(detection_prob_intercept(4), 175.0 / 256.0, 1e-15);
}

TEST(InterceptTest, ResendsBasisVectors) {
    Rng rng(1);
    const std::vector<Qubit> seq{ket0(), ket_plus(), ket1()};
    const auto r = intercept_resend(seq, 0.0, rng);
    ASSERT_EQ(r.sequence.size(), 3u);
    EXPECT_NEAR(std::norm(r.sequence[0][0]), 1.0, 1e-12);
    EXPECT_NEAR(std::norm(r.sequence[2][1]), 1.0, 1e-12);
    ASSERT_EQ(r.record.measured_outcomes.size(), 3u);
    EXPECT_EQ(*r.record.measured_outcomes[0], 0);
}

TEST(PCorrTest, ReferenceValue) {
    const auto b = p_corr_bound(360, 21, 6);
    EXPECT_NEAR(b.exact, 5.11900666699428e-8, 1e-20);
    EXPECT_NEAR(b.log2_exact, std::log2(1.0 / (360.0 * 54264.0)), 1e-9);
}

TEST(PCorrTest, BinomialPowerBoundExhaustive) {
    for (std::uint64_t l = 1; l <= 30; ++l) {
        for (std::uint64_t n = 1; n <= l; ++n) EXPECT_TRUE(binomial_power_bound(l, n)) << l << "," << n;
    }
}

TEST(PCorrTest, BoundHoldsOverGrid) {
    for (std::uint64_t n = 1; n <= 40; ++n) {
        for (std::uint64_t l = n; l <= 400; ++l) EXPECT_TRUE(p_corr_bound(360, l, n).bound_holds()) << l << "," << n;
    }
}

TEST(PCorrTest, HugeSequencesStayFinite) {
    const auto b = p_corr_bound(360, 5000, 2000);
    EXPECT_TRUE(std::isfinite(b.log2_exact));
    EXPECT_LT(b.log2_exact, -2000.0);
    EXPECT_THROW(p_corr_bound(360, 3, 4), std::invalid_argument);
}

TEST(EntangleTest, UnitaryIsUnitaryForAllFidelities) {
    for (double f : {0.0, 0.25, 0.5, 0.6, 0.8, 1.0}) EXPECT_NO_THROW(entangling_unitary(f));
    EXPECT_THROW(entangling_unitary(1.2), std::invalid_argument);
}

TEST(EntangleTest, DecoyPassMatchesClosedForm) {
    for (double f : {0.6, 0.8, 1.0}) {
        EXPECT_NEAR(entangle_decoy_pass_analytic(f), (f + 0.5) / 2.0, 1e-12);
        EXPECT_NEAR(entangle_decoy_pass_prob(f), (f + 0.5) / 2.0, 1e-15);
    }
}

TEST(EntangleTest, SampledDecoyPass) {
    Rng rng(2);
    const double f = 0.8;
    const int trials = 40000;
    int pass = 0;
    for (int i = 0; i < trials; ++i) {
        const bool basis_x = rng.bit();
        const bool bit = rng.bit();
        const auto joint = entangle_attach(bb84_state(basis_x ? BasisChoice::X : BasisChoice::Z, bit), f);
        const auto r = partial_measure(joint, basis_of(basis_x ? BasisChoice::X : BasisChoice::Z), rng);
        pass += (r.outcome == 1) == bit ? 1 : 0;
    }
    const double p = (f + 0.5) / 2.0;
    EXPECT_NEAR(pass / double(trials), p, 3 * sigma(p, trials) + 1e-3);
}

TEST(EntangleTest, RecordsAncillaStates) {
    const auto r = entangle_sequence({ket0(), ket1()}, 0.9);
    ASSERT_EQ(r.record.ancilla_states.size(), 2u);
    EXPECT_TRUE(r.record.ancilla_states[0].has_value());
    EXPECT_EQ(r.sequence[0].dim(), 8);
}

TEST(EntangleTest, DistinguishabilityIsAProbability) {
    for (double f : {0.6, 0.8, 1.0}) {
        const double d = eve_message_distinguishability(7.0, f);
        EXPECT_GE(d, 0.0);
        EXPECT_LE(d, 1.0);
    }
}

TEST(DosTest, PassClosedForms) {
    const PauliWeights cases[] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0.5, 0.5, 0.5, 0.5}};
    const double expected[] = {1.0, 0.75, (1 + 0.25 + 0.25) / 2};
    for (int i = 0; i < 3; ++i) {
        const auto& w = cases[i];
        const double formula = (1 + w[0] * w[0] + (w[1] * w[1] + w[3] * w[3]) / 2) / 2;
        EXPECT_NEAR(dos_pass_prob(w), formula, 1e-10);
        EXPECT_NEAR(dos_pass_prob(w), expected[i], 1e-12);
        EXPECT_NEAR(dos_pass_given_attack_analytic(w), dos_pass_given_attack(w), 1e-10);
    }
}

TEST(DosTest, SinglePauliCoherentMatchesMixture) {
    for (const PauliWeights& w : {PauliWeights{1, 0, 0, 0}, PauliWeights{0, 1, 0, 0}, PauliWeights{0, 0, 1, 0},
                                  PauliWeights{0, 0, 0, 1}}) {
        EXPECT_NEAR(dos_coherent_pass_analytic(w), dos_pass_given_attack(w), 1e-12);
    }
}

TEST(DosTest, NonUnitaryCombinationRejected) {
    EXPECT_THROW(dos_unitary({0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
}

TEST(DosTest, BitFlipMixtureOnComputationalBasisIsHalf) {
    Rng rng(3);
    const int trials = 100000;
    int flipped = 0;
    const std::vector<Qubit> seq(1, ket0());
    for (int i = 0; i < trials; ++i) {
        const auto r = dos_apply(seq, {0, 1, 0, 0}, rng);
        flipped += measure(r.sequence[0], Basis::computational(), rng).outcome;
    }
    EXPECT_NEAR(flipped / double(trials), 0.5, 3 * sigma(0.5, trials));
}

TEST(DosTest, BitFlipMixtureAveragedOverAnglesIsQuarter) {
    Rng rng(4);
    const int trials = 100000;
    int flipped = 0;
    for (int i = 0; i < trials; ++i) {
        const auto u = rotation_gate(static_cast<double>(1 + rng.below(360)));
        const std::vector<Qubit> seq(1, apply(u, ket0()));
        const auto r = dos_apply(seq, {0, 1, 0, 0}, rng);
        flipped += measure(apply(u.inverse(), r.sequence[0]), Basis::computational(), rng).outcome;
    }
    EXPECT_NEAR(flipped / double(trials), 0.25, 3 * sigma(0.25, trials));
}

TEST(MitmTest, DecoyPassIsHalf) {
    EXPECT_DOUBLE_EQ(mitm_decoy_pass_analytic(), 0.5);
    EXPECT_NEAR(detection_prob_mitm(20), 1 - std::pow(2.0, -20), 1e-15);
}

TEST(ImpersonationTest, ClosedForms) {
    EXPECT_DOUBLE_EQ(detection_prob_impersonate_alice(8), 0.9375);
    EXPECT_DOUBLE_EQ(acceptance_prob_impersonate_bob(4), 0.0625);
    EXPECT_DOUBLE_EQ(id_b1_guess_prob(2), 0.5625);
}

TEST(AttackedSessionTest, NoAttackDelivers) {
    ProtocolConfig c;
    c.seed = 5;
    const PartyIdentities ids{BitString::parse("1100"), BitString::parse("0111")};
    const auto m = BitString::parse("011101");
    const auto s = run_attacked_session(c, ids, m, NoAttack{});
    ASSERT_EQ(s.outcome.status, SessionStatus::Delivered);
    EXPECT_EQ(*s.outcome.recovered_message, m);
    EXPECT_EQ(s.outcome, run_session(c, ids, m));
}

TEST(AttackedSessionTest, ImpersonatedAliceIsMostlyRejected) {
    ProtocolConfig c;
    c.k = 8;
    c.m = 2;
    const PartyIdentities ids{BitString::parse("11001010"), BitString::parse("01110001")};
    int detected = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
        c.seed = static_cast<std::uint64_t>(i);
        detected += impersonate_alice_session(c, ids).outcome.status == SessionStatus::AbortedAuthA ? 1 : 0;
    }
    EXPECT_NEAR(detected / double(trials), 0.9375, 3 * sigma(0.9375, trials) + 0.005);
}

TEST(AttackedSessionTest, ImpersonatedBobGuessesBaseAtThreeQuarterRate) {
    ProtocolConfig c;
    c.k = 4;
    const PartyIdentities ids{BitString::parse("1100"), BitString::parse("0111")};
    int accepted = 0;
    int guessed = 0;
    const int trials = 8000;
    for (int i = 0; i < trials; ++i) {
        c.seed = static_cast<std::uint64_t>(i);
        const auto s = impersonate_bob_session(c, ids, BitString::parse("011101"));
        accepted += s.outcome.r_match ? 1 : 0;
        guessed += s.eve.guessed_id_b1 == s.true_id_b1 ? 1 : 0;
    }
    EXPECT_NEAR(accepted / double(trials), 0.0625, 3 * sigma(0.0625, trials) + 0.005);
    EXPECT_NEAR(guessed / double(trials), std::pow(0.75, 4), 3 * sigma(0.3164, trials) + 0.005);
}

TEST(AttackedSessionTest, MitmAbortsAtSecurityCheck) {
    ProtocolConfig c;
    c.m = 10;
    const PartyIdentities ids{BitString::parse("1100"), BitString::parse("0111")};
    int aborted = 0;
    for (int i = 0; i < 500; ++i) {
        c.seed = static_cast<std::uint64_t>(i);
        const auto s = run_attacked_session(c, ids, BitString::parse("011101"), ManInTheMiddle{});
        aborted += s.outcome.status == SessionStatus::AbortedSecurityCheck ? 1 : 0;
    }
    EXPECT_GE(aborted, 490);
}

TEST(AttackedSessionTest, DeterministicGivenSeed) {
    ProtocolConfig c;
    c.seed = 17;
    const PartyIdentities ids{BitString::parse("1100"), BitString::parse("0111")};
    const auto m = BitString::parse("011101");
    for (const AttackModel& a : {AttackModel{InterceptResend{}}, AttackModel{EntangleMeasure{0.7}},
                                 AttackModel{DenialOfService{{0.6, 0.8, 0, 0}}}, AttackModel{ManInTheMiddle{}}}) {
        EXPECT_EQ(run_attacked_session(c, ids, m, a).outcome, run_attacked_session(c, ids, m, a).outcome);
    }
}

}  // namespace
}  // namespace qsdc
