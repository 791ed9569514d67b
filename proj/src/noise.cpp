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

#include "qsdc/noise.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace qsdc {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

// One quantum-jump step of amplitude damping with decay probability `g`.
Qubit damping_step(const Qubit& q, double g, Rng& rng) {
    const Eigen::Index rest = q.dim() / 2;
    const auto& a = q.amplitudes();
    const double excited = a.tail(rest).squaredNorm();
    const double jump = g * excited;
    if (rng.uniform() < jump) {
        Qubit::Vector out = Qubit::Vector::Zero(q.dim());
        out.head(rest) = a.tail(rest);
        return Qubit::normalized(out);
    }
    Qubit::Vector out = a;
    out.tail(rest) *= std::sqrt(1.0 - g);
    return Qubit::normalized(out);
}

}  // namespace

DeviceModel DeviceModel::ideal() {
    DeviceModel d;
    d.gate_error = 0.0;
    d.readout_error = 0.0;
    d.calibration_offset_deg = 0.0;
    return d;
}

void DeviceModel::validate() const {
    if (!is_probability(gate_error)) throw std::invalid_argument("gate_error must be in [0, 1]");
    if (!is_probability(readout_error)) throw std::invalid_argument("readout_error must be in [0, 1]");
    if (!(gate_duration_ns > 0.0)) throw std::invalid_argument("gate_duration_ns must be positive");
    if (!(t1_us > 0.0)) throw std::invalid_argument("t1_us must be positive");
    if (!std::isfinite(calibration_offset_deg)) {
        throw std::invalid_argument("calibration_offset_deg must be finite");
    }
}

std::string_view to_string(GateErrorKind kind) {
    switch (kind) {
        case GateErrorKind::BitFlip:
            return "bit_flip";
        case GateErrorKind::AmplitudeDamping:
            return "amplitude_damping";
        case GateErrorKind::Depolarizing:
            return "depolarizing";
    }
    return "bit_flip";
}

GateErrorKind gate_error_kind_from_string(std::string_view name) {
    if (name == "bit_flip") return GateErrorKind::BitFlip;
    if (name == "amplitude_damping") return GateErrorKind::AmplitudeDamping;
    if (name == "depolarizing") return GateErrorKind::Depolarizing;
    throw std::invalid_argument("unknown gate error kind: " + std::string(name));
}

Qubit apply_channel(const Qubit& q, const ChannelModel& ch, Rng& rng) {
    if (q.dim() != 2 && q.dim() != 8) throw std::invalid_argument("apply_channel expects a qubit");
    const double p = ch.device.gate_error;
    if (ch.n_gates == 0 || p == 0.0) return q;

    static const Gate x = pauli_x();
    static const Gate iy = pauli_iy();
    static const Gate z = pauli_z();
    const double decay = damping_step_probability(ch.device);

    Qubit state = q;
    for (std::size_t g = 0; g < ch.n_gates; ++g) {
        if (!rng.bernoulli(p)) continue;
        switch (ch.kind) {
            case GateErrorKind::BitFlip:
                state = apply_on_qubit(x, state);
                break;
            case GateErrorKind::AmplitudeDamping:
                state = damping_step(state, decay, rng);
                break;
            case GateErrorKind::Depolarizing: {
                const auto which = rng.below(3);
                state = apply_on_qubit(which == 0 ? x : which == 1 ? iy : z, state);
                break;
            }
        }
    }
    return state;
}

double t1_survival(double t, double t1) {
    if (!(t >= 0.0) || !(t1 > 0.0)) throw std::invalid_argument("t1_survival needs t >= 0 and t1 > 0");
    return std::exp(-t / t1);
}

double damping_step_probability(const DeviceModel& device) {
    return 1.0 - t1_survival(device.gate_duration_ns, device.t1_us * 1000.0);
}

double predicted_success(double n, double p_error, double gamma) {
    if (!std::isfinite(n) || !std::isfinite(gamma) || !(p_error >= 0.0 && p_error < 1.0)) {
        throw std::invalid_argument("predicted_success needs finite inputs and p_error in [0, 1)");
    }
    return std::pow(1.0 - p_error, gamma * n);
}

GammaFit fit_gamma(std::span<const SuccessSample> samples, double p_error) {
    if (!(p_error > 0.0 && p_error < 1.0)) throw std::invalid_argument("fit_gamma needs p_error in (0, 1)");
    std::set<double> distinct;
    for (const auto& s : samples) {
        if (!(s.success > 0.0 && s.success <= 1.0)) {
            throw std::invalid_argument("observed success probabilities must lie in (0, 1]");
        }
        distinct.insert(s.n);
    }
    if (distinct.size() < 2) throw std::invalid_argument("fit_gamma needs samples at two or more distinct n");

    // Model through the origin: y = gamma * x.
    const auto rows = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd design(rows, 1);
    Eigen::VectorXd y(rows);
    const double log_keep = std::log1p(-p_error);
    for (Eigen::Index i = 0; i < rows; ++i) {
        design(i, 0) = samples[static_cast<std::size_t>(i)].n * log_keep;
        y(i) = std::log(samples[static_cast<std::size_t>(i)].success);
    }
    const Eigen::VectorXd sol = design.colPivHouseholderQr().solve(y);
    const double gamma = sol(0);
    const double rms = std::sqrt((design * sol - y).squaredNorm() / static_cast<double>(rows));
    return {gamma, rms};
}

bool readout_flip(bool outcome, double p_readout, Rng& rng) {
    if (!is_probability(p_readout)) throw std::invalid_argument("readout probability must be in [0, 1]");
    return rng.bernoulli(p_readout) ? !outcome : outcome;
}

Gate calibrated_rotation(double theta_deg, double offset_deg) { return rotation_gate(theta_deg + offset_deg); }

}  // namespace qsdc
