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

#include "qsdc/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <charconv>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

namespace qsdc {

namespace {

constexpr std::uint64_t kSetupStream = 5;

double param(const Params& params, const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument("missing parameter '" + key + "'");
    return it->second;
}

std::size_t count_param(const Params& params, const std::string& key) {
    const double v = param(params, key);
    if (!(v >= 0.0) || v != std::floor(v)) throw std::invalid_argument("parameter '" + key + "' must be a count");
    return static_cast<std::size_t>(v);
}

PauliWeights weights_param(const Params& params) {
    return {param(params, "w1"), param(params, "w2"), param(params, "w3"), param(params, "w4")};
}

Params weight_params(const PauliWeights& w) { return {{"w1", w[0]}, {"w2", w[1]}, {"w3", w[2]}, {"w4", w[3]}}; }

double probability_param(const Params& params, const std::string& key) {
    const double v = param(params, key);
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("parameter '" + key + "' must be in [0, 1]");
    return v;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

EstimateWithCI proportion_of(const std::vector<double>& hits) {
    std::size_t s = 0;
    for (double h : hits) s += h != 0.0 ? 1 : 0;
    return estimate_proportion(s, hits.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// Scenarios and trials

void Scenario::validate() const {
    config.validate();
    if (!randomize_identities) identities.validate(config);
    if (message && message->size() != config.n) throw std::invalid_argument("scenario message length must equal n");
    validate_attack(attack);
    channel.validate();
    if (trials < 1) throw std::invalid_argument("a scenario needs at least one trial");
}

SessionOptions Scenario::session_options() const {
    SessionOptions options;
    options.overrides = overrides;
    options.calibration_offset_deg = channel.device.calibration_offset_deg;
    options.readout_error = channel.device.readout_error;
    options.repetition = ecc;
    options.interleave_copies = interleave_copies;
    return options;
}

TrialRecord run_trial(const Scenario& scenario, std::uint64_t master_seed, std::size_t index) {
    TrialRecord out;
    out.seed = derive_seed(master_seed, index);
    Rng setup(derive_seed(out.seed, kSetupStream));
    if (scenario.randomize_identities) {
        out.identities.id_a = BitString::random(scenario.config.k, setup);
        out.identities.id_b = BitString::random(scenario.config.k, setup);
    } else {
        out.identities = scenario.identities;
    }
    out.sent_message = scenario.message ? *scenario.message : BitString::random(scenario.config.n, setup);
    ProtocolConfig config = scenario.config;
    config.seed = out.seed;
    out.session = run_attacked_session(config, out.identities, out.sent_message, scenario.attack, scenario.channel,
                                       scenario.session_options());
    if (std::holds_alternative<ImpersonateAlice>(scenario.attack)) out.sent_message = BitString();
    return out;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    const auto workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                job(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<TrialRecord> run_trials(const Scenario& scenario, std::uint64_t master_seed, unsigned threads) {
    scenario.validate();
    std::vector<TrialRecord> out(scenario.trials);
    parallel_for(scenario.trials, threads, [&](std::size_t i) { out[i] = run_trial(scenario, master_seed, i); });
    return out;
}

std::vector<double> map_trials(const Scenario& scenario, std::uint64_t master_seed,
                               const std::function<double(const TrialRecord&)>& metric, unsigned threads) {
    scenario.validate();
    std::vector<double> out(scenario.trials);
    parallel_for(scenario.trials, threads,
                 [&](std::size_t i) { out[i] = metric(run_trial(scenario, master_seed, i)); });
    return out;
}

// ---------------------------------------------------------------------------
// Estimates

EstimateWithCI estimate_proportion(std::size_t successes, std::size_t n) {
    if (n == 0) throw std::invalid_argument("cannot estimate from zero trials");
    if (successes > n) throw std::invalid_argument("more successes than trials");
    EstimateWithCI e;
    e.n_trials = n;
    e.point = static_cast<double>(successes) / static_cast<double>(n);
    e.std_error = std::sqrt(e.point * (1.0 - e.point) / static_cast<double>(n));
    e.ci_low = std::max(0.0, e.point - 1.96 * e.std_error);
    e.ci_high = std::min(1.0, e.point + 1.96 * e.std_error);
    return e;
}

EstimateWithCI estimate(const std::vector<TrialRecord>& trials,
                        const std::function<bool(const TrialRecord&)>& predicate) {
    std::size_t s = 0;
    for (const auto& t : trials) s += predicate(t) ? 1 : 0;
    return estimate_proportion(s, trials.size());
}

EstimateWithCI estimate_mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("cannot estimate from zero trials");
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    EstimateWithCI e;
    e.n_trials = values.size();
    e.point = mean;
    e.std_error = std::sqrt(sq / n / n);
    e.ci_low = std::max(0.0, e.point - 1.96 * e.std_error);
    e.ci_high = std::min(1.0, e.point + 1.96 * e.std_error);
    return e;
}

// ---------------------------------------------------------------------------
// Closed forms

std::string format_params(const Params& params) {
    std::string out;
    for (const auto& [key, value] : params) {
        if (!out.empty()) out += ';';
        out += key + '=' + format_double(value);
    }
    return out;
}

Params parse_params(const std::string& text) {
    Params out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw std::invalid_argument("malformed parameter '" + item + "'");
        std::size_t used = 0;
        const std::string value = item.substr(eq + 1);
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("malformed parameter value '" + item + "'");
        out[item.substr(0, eq)] = v;
    }
    return out;
}

double closed_form(const std::string& quantity, const Params& params) {
    if (quantity == "impersonate_alice_detect") return detection_prob_impersonate_alice(count_param(params, "k"));
    if (quantity == "impersonate_bob_accept") return acceptance_prob_impersonate_bob(count_param(params, "k"));
    if (quantity == "impersonate_bob_detect") return 1.0 - acceptance_prob_impersonate_bob(count_param(params, "k"));
    if (quantity == "eve_idb1_guess") return id_b1_guess_prob(count_param(params, "k"));
    if (quantity == "intercept_detect") return detection_prob_intercept(count_param(params, "m"));
    if (quantity == "intercept_decoy_survival") return 0.75;
    if (quantity == "p_corr") {
        return p_corr_bound(count_param(params, "N"), count_param(params, "l"), count_param(params, "n")).exact;
    }
    if (quantity == "entangle_decoy_pass") return entangle_decoy_pass_prob(probability_param(params, "F"));
    if (quantity == "entangle_detect") {
        const double p = entangle_decoy_pass_prob(probability_param(params, "F"));
        return 1.0 - std::pow(p, static_cast<double>(count_param(params, "m")));
    }
    if (quantity == "dos_pass_u") return dos_pass_given_attack(weights_param(params));
    if (quantity == "dos_pass") return dos_pass_prob(weights_param(params));
    if (quantity == "dos_detect") {
        const double p = dos_pass_prob(weights_param(params));
        return 1.0 - std::pow(p, static_cast<double>(count_param(params, "m")));
    }
    if (quantity == "mitm_detect") return detection_prob_mitm(count_param(params, "m"));
    if (quantity == "mitm_decoy_pass") return 0.5;
    if (quantity == "predicted_success") {
        return predicted_success(param(params, "n"), probability_param(params, "p_error"), param(params, "gamma"));
    }
    if (quantity == "ecc_logical") {
        return logical_error_rate(static_cast<int>(count_param(params, "d")), probability_param(params, "p"));
    }
    if (quantity == "t1_survival") return t1_survival(param(params, "t"), param(params, "t1"));
    if (quantity == "readout_flip") return probability_param(params, "p");
    throw std::invalid_argument("unknown closed-form quantity '" + quantity + "'");
}

ComparisonRow make_row(std::string quantity, Params params, double closed_form_value, const EstimateWithCI& simulated,
                       double tolerance) {
    ComparisonRow row;
    row.quantity = std::move(quantity);
    row.params = std::move(params);
    row.closed_form = closed_form_value;
    row.simulated = simulated;
    row.tolerance = tolerance;
    row.pass = std::abs(closed_form_value - simulated.point) <= std::max(3.0 * simulated.std_error, tolerance);
    return row;
}

// ---------------------------------------------------------------------------
// Physical-level simulations

EstimateWithCI simulate_repetition(int distance, double p, std::size_t trials, std::uint64_t seed,
                                   unsigned threads) {
    const RepetitionCode code(distance);
    ChannelModel channel;
    channel.n_gates = 1;
    channel.kind = GateErrorKind::BitFlip;
    channel.device.gate_error = p;
    channel.validate();
    std::vector<double> wrong(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        Rng rng(derive_seed(seed, i));
        const bool bit = rng.bit();
        BitString outcomes(static_cast<std::size_t>(code.distance()));
        const auto copies = encode_repetition(bit, code.distance());
        for (std::size_t j = 0; j < copies.size(); ++j) {
            const Qubit sent = apply_channel(copies[j], channel, rng);
            outcomes.set(j, measure(sent, Basis::computational(), rng).outcome == 1);
        }
        wrong[i] = decode_majority(outcomes, code.distance()) != bit ? 1.0 : 0.0;
    });
    return proportion_of(wrong);
}

EstimateWithCI simulate_t1_survival(const DeviceModel& device, std::size_t n_gates, std::size_t trials,
                                    std::uint64_t seed, unsigned threads) {
    ChannelModel channel;
    channel.n_gates = n_gates;
    channel.kind = GateErrorKind::AmplitudeDamping;
    channel.device = device;
    channel.device.gate_error = 1.0;
    channel.validate();
    std::vector<double> alive(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        Rng rng(derive_seed(seed, i));
        const Qubit out = apply_channel(ket1(), channel, rng);
        alive[i] = measure(out, Basis::computational(), rng).outcome == 1 ? 1.0 : 0.0;
    });
    return proportion_of(alive);
}

EstimateWithCI simulate_readout(double p_readout, std::size_t trials, std::uint64_t seed, unsigned threads) {
    std::vector<double> flipped(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        Rng rng(derive_seed(seed, i));
        flipped[i] = readout_flip(false, p_readout, rng) ? 1.0 : 0.0;
    });
    return proportion_of(flipped);
}

Scenario integrated_ecc_scenario(double p, int distance, std::size_t n, std::size_t trials) {
    Scenario s;
    s.config.n = n;
    s.config.c = 2;
    s.config.k = 10;
    s.config.m = 4;
    s.config.decoy_error_threshold = 1.0;
    s.config.auth_error_threshold = 1.0;
    s.config.check_bit_error_threshold = 1.0;
    s.identities = {BitString(10, true), BitString(10, true)};
    s.overrides.theta = kThetaMax;
    s.channel.n_gates = 1;
    s.channel.kind = GateErrorKind::BitFlip;
    s.channel.device.gate_error = p;
    s.ecc = RepetitionCode(distance);
    s.trials = trials;
    return s;
}

double message_bit_error(const TrialRecord& trial) {
    const auto& recovered = trial.outcome().recovered_message;
    if (!recovered) throw std::logic_error("message_bit_error needs a delivered session");
    if (recovered->size() != trial.sent_message.size() || recovered->empty()) {
        throw std::logic_error("recovered message has the wrong length");
    }
    return static_cast<double>((*recovered ^ trial.sent_message).count_ones()) /
           static_cast<double>(recovered->size());
}

// ---------------------------------------------------------------------------
// The comparison suite

namespace {

double decoy_pass(const TrialRecord& t) { return 1.0 - t.outcome().decoy_error_rate; }

double status_is(const TrialRecord& t, SessionStatus s) { return t.outcome().status == s ? 1.0 : 0.0; }

Scenario attack_scenario(std::size_t k, std::size_t m, AttackModel attack, std::size_t trials) {
    Scenario s;
    s.config.n = 4;
    s.config.c = 1;
    s.config.k = k;
    s.config.m = m;
    s.randomize_identities = true;
    s.attack = std::move(attack);
    s.trials = trials;
    return s;
}

class SuiteBuilder {
  public:
    SuiteBuilder(std::uint64_t master_seed, std::size_t trials, unsigned threads)
        : master_(master_seed), trials_(trials), threads_(threads) {}

    std::uint64_t next_seed() { return derive_seed(master_, ++row_); }

    void proportion(const std::string& quantity, const Params& params, const Scenario& scenario,
                    const std::function<double(const TrialRecord&)>& hit, double tolerance = 0.01) {
        const auto hits = map_trials(scenario, next_seed(), hit, threads_);
        add(quantity, params, proportion_of(hits), tolerance);
    }

    void mean(const std::string& quantity, const Params& params, const Scenario& scenario,
              const std::function<double(const TrialRecord&)>& value, double tolerance = 0.01) {
        const auto values = map_trials(scenario, next_seed(), value, threads_);
        add(quantity, params, estimate_mean(values), tolerance);
    }

    void add(const std::string& quantity, const Params& params, const EstimateWithCI& e, double tolerance = 0.01) {
        rows_.push_back(make_row(quantity, params, closed_form(quantity, params), e, tolerance));
    }

    std::size_t trials() const { return trials_; }
    unsigned threads() const { return threads_; }
    std::vector<ComparisonRow> take() { return std::move(rows_); }

  private:
    std::uint64_t master_;
    std::size_t trials_;
    unsigned threads_;
    std::uint64_t row_ = 0;
    std::vector<ComparisonRow> rows_;
};

}  // namespace

std::vector<ComparisonRow> comparison_suite(std::uint64_t master_seed, std::size_t trials_per_row,
                                            unsigned threads) {
    if (trials_per_row < 10000) throw std::invalid_argument("comparison_suite needs at least 10^4 trials per row");
    SuiteBuilder b(master_seed, trials_per_row, threads);
    const std::size_t T = trials_per_row;
    constexpr std::size_t kDefaultM = 4;

    for (std::size_t k : {4, 8}) {
        const Params p{{"k", static_cast<double>(k)}};
        b.proportion("impersonate_alice_detect", p, attack_scenario(k, kDefaultM, ImpersonateAlice{}, T),
                     [](const TrialRecord& t) { return status_is(t, SessionStatus::AbortedAuthA); });
        const Scenario bob = attack_scenario(k, kDefaultM, ImpersonateBob{}, T);
        b.proportion("impersonate_bob_accept", p, bob,
                     [](const TrialRecord& t) { return t.outcome().r_match ? 1.0 : 0.0; });
        b.proportion("eve_idb1_guess", p, bob, [](const TrialRecord& t) {
            return t.session.eve.guessed_id_b1 == t.session.true_id_b1 ? 1.0 : 0.0;
        });
    }

    for (double theta0 : {0.0, 45.0, 137.0}) {
        for (std::size_t m : {1, 4, 8}) {
            b.proportion("intercept_detect", {{"m", static_cast<double>(m)}, {"theta0", theta0}},
                         attack_scenario(4, m, InterceptResend{theta0}, T),
                         [](const TrialRecord& t) { return status_is(t, SessionStatus::AbortedSecurityCheck); });
        }
        b.mean("intercept_decoy_survival", {{"theta0", theta0}}, attack_scenario(4, kDefaultM, InterceptResend{theta0}, T),
               decoy_pass);
    }

    for (double f : {0.6, 0.8, 1.0}) {
        const Scenario s = attack_scenario(4, kDefaultM, EntangleMeasure{f}, T);
        b.mean("entangle_decoy_pass", {{"F", f}}, s, decoy_pass);
        b.proportion("entangle_detect", {{"F", f}, {"m", static_cast<double>(kDefaultM)}}, s,
                     [](const TrialRecord& t) { return status_is(t, SessionStatus::AbortedSecurityCheck); });
    }

    const PauliWeights dos_grid[] = {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.5, 0.5, 0.5, 0.5}};
    for (const auto& w : dos_grid) {
        const Scenario s = attack_scenario(4, kDefaultM, DenialOfService{w}, T);
        b.mean("dos_pass", weight_params(w), s, decoy_pass);
        Params detect = weight_params(w);
        detect["m"] = static_cast<double>(kDefaultM);
        b.proportion("dos_detect", detect, s,
                     [](const TrialRecord& t) { return status_is(t, SessionStatus::AbortedSecurityCheck); });
    }

    for (std::size_t m : {2, 6, 10}) {
        b.proportion("mitm_detect", {{"m", static_cast<double>(m)}}, attack_scenario(4, m, ManInTheMiddle{}, T),
                     [](const TrialRecord& t) { return status_is(t, SessionStatus::AbortedSecurityCheck); });
    }
    b.mean("mitm_decoy_pass", {}, attack_scenario(4, kDefaultM, ManInTheMiddle{}, T), decoy_pass);

    for (double p : {0.05, 0.1, 0.2}) {
        b.add("ecc_logical", {{"d", 3}, {"p", p}}, simulate_repetition(3, p, T, b.next_seed(), threads), 0.003);
    }
    b.mean("ecc_logical", {{"d", 3}, {"p", 0.1}}, integrated_ecc_scenario(0.1, 3, 8, T), message_bit_error, 0.005);

    DeviceModel device = DeviceModel::ideal();
    device.t1_us = 1.0;
    for (std::size_t gates : {1, 3, 7, 14, 28}) {
        const double t_ns = static_cast<double>(gates) * device.gate_duration_ns;
        b.add("t1_survival", {{"t", t_ns}, {"t1", device.t1_us * 1000.0}},
              simulate_t1_survival(device, gates, T, b.next_seed(), threads), 0.0);
    }
    const double readout = DeviceModel{}.readout_error;
    b.add("readout_flip", {{"p", readout}}, simulate_readout(readout, T, b.next_seed(), threads), 0.0);

    return b.take();
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<SweepPoint> sweep_channel_length(std::span<const std::size_t> n_values, const SweepSource& source,
                                             std::size_t trials, std::uint64_t seed, unsigned threads) {
    if (std::set<std::size_t>(n_values.begin(), n_values.end()).size() != n_values.size()) {
        throw std::invalid_argument("sweep channel lengths must be distinct");
    }
    if (trials < 1) throw std::invalid_argument("a sweep needs at least one trial per point");
    std::vector<SweepPoint> out;
    for (std::size_t n : n_values) {
        const std::uint64_t point_seed = derive_seed(seed, n);
        std::vector<double> ok(trials);
        if (const auto* dev = std::get_if<DeviceSweep>(&source)) {
            ChannelModel channel;
            channel.n_gates = n;
            channel.kind = dev->kind;
            channel.device = dev->device;
            channel.validate();
            const Qubit prepared = dev->bit ? ket1() : ket0();
            parallel_for(trials, threads, [&](std::size_t i) {
                Rng rng(derive_seed(point_seed, i));
                const Qubit q = apply_channel(prepared, channel, rng);
                bool bit = measure(q, Basis::computational(), rng).outcome == 1;
                bit = readout_flip(bit, channel.device.readout_error, rng);
                ok[i] = bit == dev->bit ? 1.0 : 0.0;
            });
        } else {
            const auto& syn = std::get<SyntheticSweep>(source);
            const double p = predicted_success(static_cast<double>(n), syn.p_error, syn.gamma);
            parallel_for(trials, threads, [&](std::size_t i) {
                Rng rng(derive_seed(point_seed, i));
                ok[i] = rng.bernoulli(p) ? 1.0 : 0.0;
            });
        }
        out.push_back({n, proportion_of(ok)});
    }
    return out;
}

std::vector<SuccessSample> success_samples(std::span<const SweepPoint> points) {
    std::vector<SuccessSample> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back({static_cast<double>(p.n), p.success.point});
    return out;
}

}  // namespace qsdc
