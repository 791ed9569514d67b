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

#include "qsdc/ecc.hpp"
#include "qsdc/noise.hpp"

namespace qsdc {
namespace {

double sigma(double p, int n) { return std::sqrt(p * (1 - p) / n); }

TEST(DeviceModelTest, Validation) {
    DeviceModel d;
    EXPECT_NO_THROW(d.validate());
    d.gate_error = 1.5;
    EXPECT_THROW(d.validate(), std::invalid_argument);
    d = DeviceModel{};
    d.t1_us = 0.0;
    EXPECT_THROW(d.validate(), std::invalid_argument);
}

TEST(DeviceModelTest, KindNamesRoundTrip) {
    for (auto k : {GateErrorKind::BitFlip, GateErrorKind::AmplitudeDamping, GateErrorKind::Depolarizing}) {
        EXPECT_EQ(gate_error_kind_from_string(to_string(k)), k);
    }
    EXPECT_THROW(gate_error_kind_from_string("phase"), std::invalid_argument);
}

TEST(ChannelTest, IdealChannelIsIdentity) {
    Rng rng(1);
    const auto q = ket_plus();
    EXPECT_EQ(apply_channel(q, ChannelModel::ideal(), rng), q);
}

TEST(ChannelTest, CertainBitFlipFlipsEveryGate) {
    ChannelModel ch;
    ch.device.gate_error = 1.0;
    ch.n_gates = 3;
    Rng rng(2);
    const auto out = apply_channel(ket0(), ch, rng);
    EXPECT_NEAR(std::norm(out[1]), 1.0, 1e-12);
}

TEST(ChannelTest, BitFlipSurvivalMatchesParityLaw) {
    ChannelModel ch;
    ch.device.gate_error = 0.001;
    ch.n_gates = 100;
    const double expected = 0.909283402344214;
    EXPECT_NEAR(0.5 * (1 + std::pow(0.998, 100)), expected, 1e-14);
    Rng rng(3);
    const int trials = 100000;
    int kept = 0;
    for (int i = 0; i < trials; ++i) {
        kept += measure(apply_channel(ket0(), ch, rng), Basis::computational(), rng).outcome == 0 ? 1 : 0;
    }
    EXPECT_NEAR(kept / double(trials), expected, 3 * sigma(expected, trials));
}

TEST(ChannelTest, AmplitudeDampingNeverExcitesGroundState) {
    ChannelModel ch;
    ch.kind = GateErrorKind::AmplitudeDamping;
    ch.device.gate_error = 1.0;
    ch.device.t1_us = 0.5;
    ch.n_gates = 20;
    Rng rng(4);
    for (int i = 0; i < 100; ++i) EXPECT_NEAR(std::norm(apply_channel(ket0(), ch, rng)[0]), 1.0, 1e-12);
}

TEST(ChannelTest, AmplitudeDampingFollowsT1Law) {
    DeviceModel d = DeviceModel::ideal();
    d.gate_error = 1.0;
    d.t1_us = 1.0;
    ChannelModel ch{7, GateErrorKind::AmplitudeDamping, d};
    const double t = 7 * d.gate_duration_ns;
    const double expected = t1_survival(t, 1000.0);
    Rng rng(5);
    const int trials = 100000;
    int excited = 0;
    for (int i = 0; i < trials; ++i) {
        excited += measure(apply_channel(ket1(), ch, rng), Basis::computational(), rng).outcome;
    }
    EXPECT_NEAR(excited / double(trials), expected, 3 * sigma(expected, trials));
}

TEST(ChannelTest, DepolarizingRandomizesOutcome) {
    ChannelModel ch;
    ch.kind = GateErrorKind::Depolarizing;
    ch.device.gate_error = 1.0;
    ch.n_gates = 1;
    Rng rng(6);
    const int trials = 60000;
    int flipped = 0;
    for (int i = 0; i < trials; ++i) {
        flipped += measure(apply_channel(ket0(), ch, rng), Basis::computational(), rng).outcome;
    }
    EXPECT_NEAR(flipped / double(trials), 2.0 / 3.0, 3 * sigma(2.0 / 3.0, trials));
}

TEST(NoiseLawTest, T1Survival) {
    EXPECT_NEAR(t1_survival(1.0, 1.0), 0.367879441171442, 1e-15);
    EXPECT_DOUBLE_EQ(t1_survival(0.0, 3.0), 1.0);
    EXPECT_THROW(t1_survival(-1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(t1_survival(1.0, 0.0), std::invalid_argument);
}

TEST(NoiseLawTest, PredictedSuccess) {
    EXPECT_NEAR(predicted_success(100, 0.001, 0.18), 0.982152187051451, 1e-14);
    EXPECT_NEAR(predicted_success(100, 0.001, 0.21), 0.979208675964705, 1e-14);
    EXPECT_DOUBLE_EQ(predicted_success(0, 0.001, 0.2), 1.0);
}

TEST(NoiseLawTest, PredictedSuccessIsMonotoneInLength) {
    double prev = 1.0;
    for (int n = 0; n <= 1000; n += 50) {
        const double s = predicted_success(n, 0.001, 0.2);
        EXPECT_LE(s, prev);
        prev = s;
    }
}

TEST(FitGammaTest, RecoversExactGamma) {
    std::vector<SuccessSample> samples;
    for (int n = 100; n <= 400; n += 50) samples.push_back({double(n), predicted_success(n, 0.001, 0.21)});
    const auto fit = fit_gamma(samples, 0.001);
    EXPECT_NEAR(fit.gamma, 0.21, 1e-12);
    EXPECT_NEAR(fit.residual, 0.0, 1e-12);
}

TEST(FitGammaTest, RejectsDegenerateInput) {
    std::vector<SuccessSample> one{{100, 0.9}};
    EXPECT_THROW(fit_gamma(one, 0.001), std::invalid_argument);
    std::vector<SuccessSample> same{{100, 0.9}, {100, 0.8}};
    EXPECT_THROW(fit_gamma(same, 0.001), std::invalid_argument);
    std::vector<SuccessSample> zero{{100, 0.9}, {200, 0.0}};
    EXPECT_THROW(fit_gamma(zero, 0.001), std::invalid_argument);
}

TEST(ReadoutTest, FlipRate) {
    Rng rng(8);
    const int trials = 100000;
    int flips = 0;
    for (int i = 0; i < trials; ++i) flips += readout_flip(false, 0.067, rng) ? 1 : 0;
    EXPECT_NEAR(flips / double(trials), 0.067, 3 * sigma(0.067, trials));
    EXPECT_THROW(readout_flip(false, -0.1, rng), std::invalid_argument);
}

TEST(CalibrationTest, OffsetAddsToAngle) {
    const auto g = calibrated_rotation(7.0, 2.0);
    EXPECT_NEAR(g.matrix()(0, 0).real(), std::cos(9.0 * std::numbers::pi / 180.0), 1e-14);
}

TEST(EccTest, DistanceMustBeOdd) {
    EXPECT_THROW(RepetitionCode(2), std::invalid_argument);
    EXPECT_THROW(RepetitionCode(0), std::invalid_argument);
    EXPECT_EQ(RepetitionCode(5).corrects(), 2);
}

TEST(EccTest, DistanceThreeCorrectsEverySingleFlip) {
    for (bool bit : {false, true}) {
        for (int flip = -1; flip < 3; ++flip) {
            BitString out(3, bit);
            if (flip >= 0) out.set(static_cast<std::size_t>(flip), !bit);
            EXPECT_EQ(decode_majority(out, 3), bit);
        }
    }
}

TEST(EccTest, ExhaustivePatternsDecodeByWeight) {
    for (int d : {3, 5, 7}) {
        for (std::uint64_t pattern = 0; pattern < (1u << d); ++pattern) {
            const auto bits = BitString::from_uint(pattern, static_cast<std::size_t>(d));
            EXPECT_EQ(decode_majority(bits, d), 2 * bits.count_ones() > static_cast<std::size_t>(d));
        }
    }
}

TEST(EccTest, LogicalErrorRate) {
    EXPECT_NEAR(logical_error_rate(3, 0.1), 0.028, 1e-15);
    EXPECT_NEAR(logical_error_rate(3, 1.0 / 3.0), 7.0 / 27.0, 1e-15);
    EXPECT_DOUBLE_EQ(logical_error_rate(1, 0.2), 0.2);
    for (double p : {0.05, 0.1, 0.2}) EXPECT_NEAR(logical_error_rate(3, p), 3 * p * p - 2 * p * p * p, 1e-15);
}

TEST(EccTest, ThresholdFlipsAtOneThird) {
    EXPECT_NEAR(leading_order_threshold(3), 1.0 / 3.0, 1e-15);
    EXPECT_TRUE(threshold_check(1.0 / 3.0 - 1e-9, 3));
    EXPECT_FALSE(threshold_check(1.0 / 3.0 + 1e-9, 3));
    EXPECT_FALSE(threshold_check(0.0, 3));
    EXPECT_NEAR(exact_break_even(3), 0.5, 1e-12);
}

TEST(EccTest, LayoutMapsCopiesBack) {
    for (bool interleaved : {false, true}) {
        RepetitionLayout layout{5, 3, interleaved};
        EXPECT_EQ(layout.physical_length(), 15u);
        for (std::size_t l = 0; l < 5; ++l) {
            for (int c = 0; c < 3; ++c) EXPECT_EQ(layout.logical_of(layout.physical_index(l, c)), l);
        }
        const auto expanded = layout.expand(std::vector<int>{0, 1, 2, 3, 4});
        EXPECT_EQ(expanded.size(), 15u);
    }
}

TEST(EccTest, MaxChannelLength) {
    const long n = max_channel_length(0.2, 0.001, 2.0 / 3.0);
    EXPECT_GE(predicted_success(n, 0.001, 0.2), 2.0 / 3.0);
    EXPECT_LT(predicted_success(n + 1, 0.001, 0.2), 2.0 / 3.0);
    EXPECT_THROW(max_channel_length(0.0, 0.001, 0.5), std::invalid_argument);
}

}  // namespace
}  // namespace qsdc
