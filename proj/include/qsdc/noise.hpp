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

// Device and channel noise: a channel of n identity gates, each of which may
// err independently, plus readout flips and a calibration offset on the
// encoding rotation.

#ifndef QSDC_NOISE_HPP
#define QSDC_NOISE_HPP

#include <cstddef>
#include <span>
#include <string_view>

#include "qsdc/quantum_core.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {

struct DeviceModel {
    double gate_error = 0.001;        // p_error per identity gate
    double gate_duration_ns = 142.0;  // per identity gate
    double t1_us = 150.0;
    double readout_error = 0.067;
    double calibration_offset_deg = 0.0;

    /// Noise-free device: zero error probabilities and offset.
    static DeviceModel ideal();

    void validate() const;
    friend bool operator==(const DeviceModel&, const DeviceModel&) = default;
};

enum class GateErrorKind { BitFlip, AmplitudeDamping, Depolarizing };

std::string_view to_string(GateErrorKind kind);
GateErrorKind gate_error_kind_from_string(std::string_view name);

struct ChannelModel {
    std::size_t n_gates = 0;
    GateErrorKind kind = GateErrorKind::BitFlip;
    DeviceModel device = DeviceModel::ideal();

    static ChannelModel ideal() { return {}; }

    void validate() const { device.validate(); }
    friend bool operator==(const ChannelModel&, const ChannelModel&) = default;
};

/// Sends `q` through `ch.n_gates` noisy identity gates. Each gate errs with
/// probability `gate_error`; an erring gate applies sigma_x (BitFlip), one
/// quantum-jump step of T1 relaxation (AmplitudeDamping) or a uniformly chosen
/// Pauli (Depolarizing). Joint qubit (x) ancilla states are accepted; the
/// noise acts on the qubit factor.
Qubit apply_channel(const Qubit& q, const ChannelModel& ch, Rng& rng);

/// exp(-t / t1), both in the same time unit.
double t1_survival(double t, double t1);

/// Decay probability of one AmplitudeDamping step on |1>.
double damping_step_probability(const DeviceModel& device);

/// (1 - p_error)^(gamma * n).
double predicted_success(double n, double p_error, double gamma);

struct SuccessSample {
    double n = 0;
    double success = 0;
};

struct GammaFit {
    double gamma = 0;
    double residual = 0;  // RMS error in the log domain
};

/// Least-squares fit of log(success) = gamma * n * log(1 - p_error).
GammaFit fit_gamma(std::span<const SuccessSample> samples, double p_error);

bool readout_flip(bool outcome, double p_readout, Rng& rng);

/// U_(theta + offset).
Gate calibrated_rotation(double theta_deg, double offset_deg);

}  // namespace qsdc

#endif  // QSDC_NOISE_HPP
