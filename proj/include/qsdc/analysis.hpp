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

// Monte Carlo harness: batches of seeded sessions, binomial estimates with
// normal-approximation intervals, and the table comparing every closed form
// against simulation.

#ifndef QSDC_ANALYSIS_HPP
#define QSDC_ANALYSIS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qsdc/adversary.hpp"
#include "qsdc/bit_string.hpp"
#include "qsdc/ecc.hpp"
#include "qsdc/noise.hpp"
#include "qsdc/protocol.hpp"

namespace qsdc {

// ---------------------------------------------------------------------------
// Scenarios and trials

struct Scenario {
    ProtocolConfig config;
    PartyIdentities identities;
    /// Draw fresh identities for every trial instead of using `identities`.
    bool randomize_identities = false;
    /// Fixed message; uniform per trial when empty.
    std::optional<BitString> message;
    AttackModel attack = NoAttack{};
    ChannelModel channel = ChannelModel::ideal();
    std::optional<RepetitionCode> ecc;
    bool interleave_copies = false;
    PreparationOverrides overrides;
    std::size_t trials = 1;

    void validate() const;
    /// Readout error and calibration offset come from channel.device.
    SessionOptions session_options() const;
};

struct TrialRecord {
    std::uint64_t seed = 0;
    PartyIdentities identities;
    BitString sent_message;
    AttackedSession session;

    const SessionOutcome& outcome() const { return session.outcome; }
};

/// Trial `index` of the batch seeded by `master_seed`.
TrialRecord run_trial(const Scenario& scenario, std::uint64_t master_seed, std::size_t index);

/// Runs `count` independent jobs on up to `threads` workers (0 = hardware
/// concurrency). Jobs must only write to their own slot.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

/// All scenario.trials trials. Identical output for any thread count.
std::vector<TrialRecord> run_trials(const Scenario& scenario, std::uint64_t master_seed, unsigned threads = 1);

/// metric(trial i) for every trial, without keeping the records.
std::vector<double> map_trials(const Scenario& scenario, std::uint64_t master_seed,
                               const std::function<double(const TrialRecord&)>& metric, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Estimates

struct EstimateWithCI {
    double point = 0.0;
    double std_error = 0.0;
    std::size_t n_trials = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;

    friend bool operator==(const EstimateWithCI&, const EstimateWithCI&) = default;
};

/// Bernoulli estimate: stderr = sqrt(p(1-p)/n), CI point +- 1.96 stderr
/// clipped to [0, 1].
EstimateWithCI estimate_proportion(std::size_t successes, std::size_t n);

EstimateWithCI estimate(const std::vector<TrialRecord>& trials,
                        const std::function<bool(const TrialRecord&)>& predicate);

/// Mean of per-trial values in [0, 1]; stderr from the population variance.
EstimateWithCI estimate_mean(std::span<const double> values);

// ---------------------------------------------------------------------------
// Closed forms and comparison rows

using Params = std::map<std::string, double>;

/// "k=4;m=8" with keys sorted.
std::string format_params(const Params& params);
Params parse_params(const std::string& text);

/// Exact evaluation of a named formula. Ids: impersonate_alice_detect (k),
/// impersonate_bob_accept (k), impersonate_bob_detect (k), eve_idb1_guess (k),
/// intercept_detect (m), intercept_decoy_survival, p_corr (N, l, n),
/// entangle_decoy_pass (F), entangle_detect (F, m), dos_pass_u (w1..w4),
/// dos_pass (w1..w4), dos_detect (w1..w4, m), mitm_detect (m),
/// mitm_decoy_pass, predicted_success (n, p_error, gamma), ecc_logical (d, p),
/// t1_survival (t, t1), readout_flip (p).
double closed_form(const std::string& quantity, const Params& params);

struct ComparisonRow {
    std::string quantity;
    Params params;
    double closed_form = 0.0;
    EstimateWithCI simulated;
    double tolerance = 0.01;
    bool pass = false;

    friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

/// pass <=> |closed_form - point| <= max(3 stderr, tolerance).
ComparisonRow make_row(std::string quantity, Params params, double closed_form_value, const EstimateWithCI& simulated,
                       double tolerance = 0.01);

/// Logical flip rate of a distance-d repetition code whose copies each pass
/// one bit-flip gate erring with probability p.
EstimateWithCI simulate_repetition(int distance, double p, std::size_t trials, std::uint64_t seed,
                                   unsigned threads = 1);

/// Fraction of |1> still excited after `n_gates` damping gates (every gate
/// errs).
EstimateWithCI simulate_t1_survival(const DeviceModel& device, std::size_t n_gates, std::size_t trials,
                                    std::uint64_t seed, unsigned threads = 1);

/// Observed readout flip frequency.
EstimateWithCI simulate_readout(double p_readout, std::size_t trials, std::uint64_t seed, unsigned threads = 1);

/// Scenario of the integrated error-correction check: theta pinned to 360,
/// all-ones identities, relaxed thresholds, one bit-flip gate per qubit.
Scenario integrated_ecc_scenario(double p, int distance, std::size_t n, std::size_t trials);

/// Fraction of message bits Bob recovers wrongly, per trial.
double message_bit_error(const TrialRecord& trial);

/// Every closed form across the fixed parameter grid. trials_per_row >= 10^4.
std::vector<ComparisonRow> comparison_suite(std::uint64_t master_seed, std::size_t trials_per_row,
                                            unsigned threads = 1);

// ---------------------------------------------------------------------------
// Channel-length sweeps

/// A qubit prepared in |bit>, sent through n noisy identity gates and read out.
struct DeviceSweep {
    GateErrorKind kind = GateErrorKind::BitFlip;
    DeviceModel device;
    bool bit = false;
};

/// Success drawn directly from (1 - p_error)^(gamma n).
struct SyntheticSweep {
    double gamma = 0.2;
    double p_error = 0.001;
};

using SweepSource = std::variant<DeviceSweep, SyntheticSweep>;

struct SweepPoint {
    std::size_t n = 0;
    EstimateWithCI success;

    friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

std::vector<SweepPoint> sweep_channel_length(std::span<const std::size_t> n_values, const SweepSource& source,
                                             std::size_t trials, std::uint64_t seed, unsigned threads = 1);

std::vector<SuccessSample> success_samples(std::span<const SweepPoint> points);

}  // namespace qsdc

#endif  // QSDC_ANALYSIS_HPP
