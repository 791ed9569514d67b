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


// Acceptance harness: one PASS/FAIL line per criterion, exit status 0 only
// when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qsdc/adversary.hpp"
#include "qsdc/analysis.hpp"
#include "qsdc/ecc.hpp"
#include "qsdc/noise.hpp"
#include "qsdc/protocol.hpp"
#include "qsdc/report.hpp"
#include "qsdc/serialization.hpp"

namespace qsdc {
namespace {

constexpr std::uint64_t kMaster = 20261016;
constexpr std::size_t kTrials = 100000;
constexpr unsigned kThreads = 0;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
    void row(const ComparisonRow& r) {
        detail << " " << r.quantity << "(" << format_params(r.params) << ")=" << r.simulated.point << " vs "
               << r.closed_form;
        require(r.pass, r.quantity + " " + format_params(r.params));
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t seed_for(int criterion, int part) {
    return derive_seed(kMaster, static_cast<std::uint64_t>(criterion) * 1000 + static_cast<std::uint64_t>(part));
}

Scenario attack_scenario(std::size_t k, std::size_t m, AttackModel attack) {
    Scenario s;
    s.config.n = 4;
    s.config.c = 1;
    s.config.k = k;
    s.config.m = m;
    s.randomize_identities = true;
    s.attack = std::move(attack);
    s.trials = kTrials;
    return s;
}

ComparisonRow simulate_row(const std::string& quantity, const Params& params, const Scenario& scenario,
                           std::uint64_t seed, const std::function<double(const TrialRecord&)>& metric,
                           double tolerance = 0.01) {
    const auto values = map_trials(scenario, seed, metric, kThreads);
    return make_row(quantity, params, closed_form(quantity, params), estimate_mean(values), tolerance);
}

double aborted_security(const TrialRecord& t) {
    return t.outcome().status == SessionStatus::AbortedSecurityCheck ? 1.0 : 0.0;
}

double decoy_pass(const TrialRecord& t) { return 1.0 - t.outcome().decoy_error_rate; }

bool same_state(const Qubit& a, const Qubit& b) {
    return a.dim() == b.dim() && std::abs(std::norm(a.amplitudes().dot(b.amplitudes())) - 1.0) < 1e-12;
}

// ---------------------------------------------------------------------------

void check_reference_session(Verdict& v) {
    const auto start = Clock::now();
    ProtocolConfig config;
    const PartyIdentities ids{BitString::parse("1100"), BitString::parse("0111")};
    const auto message = BitString::parse("011101");
    SessionOptions o;
    o.overrides.theta = 7;
    o.overrides.r = BitString::parse("1001");
    o.overrides.check_positions = std::vector<std::size_t>{1, 4};
    o.overrides.check_values = BitString::parse("10");
    o.overrides.decoys = std::vector<DecoyDescriptor>{
        {BasisChoice::Z, false}, {BasisChoice::Z, true}, {BasisChoice::X, false}, {BasisChoice::Z, false}};
    o.overrides.insertion = InsertionPlan{{2, 4}, {1, 4, 8, 12}, {6, 8, 13}, {1, 3, 14, 18}};

    Rng tape(0);
    const auto alice = prepare_alice(config, ids, message, tape, o.overrides);
    const auto& layout = alice.sequence.layout;
    const std::string roles = "MDBDCABMTATMBCDMTMDBM";
    const std::map<char, Role> code{{'M', Role::Message}, {'C', Role::Check}, {'A', Role::AuthA},
                                    {'B', Role::AuthB},   {'T', Role::Theta}, {'D', Role::Decoy}};
    bool roles_ok = layout.size() == roles.size();
    for (std::size_t i = 0; roles_ok && i < roles.size(); ++i) roles_ok = layout.role_of[i] == code.at(roles[i]);
    v.require(roles_ok, "role layout");

    const auto u = rotation_gate(7.0);
    const std::map<char, Qubit> ket{{'x', apply(u, ket0())}, {'y', apply(u, ket1())}, {'0', ket0()},
                                    {'1', ket1()},           {'+', ket_plus()},       {'-', ket_minus()}};
    const std::string states = "x011y--y10-y-x+y-x0+y";
    bool states_ok = alice.sequence.qubits.size() == states.size();
    for (std::size_t i = 0; states_ok && i < states.size(); ++i) {
        states_ok = same_state(alice.sequence.qubits[i], ket.at(states[i]));
    }
    v.require(states_ok, "sequence states");

    auto group_is = [&](const std::vector<Qubit>& got, const std::string& want) {
        if (got.size() != want.size()) return false;
        for (std::size_t i = 0; i < want.size(); ++i) {
            if (!same_state(got[i], ket.at(want[i]))) return false;
        }
        return true;
    };
    v.require(group_is(encode_identity_a(ids.id_a), "-0"), "I_A");
    v.require(group_is(encode_identity_b(ids.id_b, BitString::parse("1001")), "1--+"), "I_B");
    v.require(group_is(encode_theta(7, ids.id_b), "1--"), "Q_theta");

    const auto out = run_session(config, ids, message, {}, o);
    v.require(out.status == SessionStatus::Delivered, "delivered");
    v.require(out.decoded_augmented && out.decoded_augmented->str() == "01110101", "M' = 01110101");
    v.require(out.recovered_message && out.recovered_message->str() == "011101", "M = 011101");
    const double elapsed = seconds_since(start);
    v.require(elapsed < 1.0, "runtime < 1 s");
    v.detail << " M'=" << (out.decoded_augmented ? out.decoded_augmented->str() : "-")
             << " M=" << (out.recovered_message ? out.recovered_message->str() : "-") << " time=" << elapsed << "s";
}

void check_honest_round_trip(Verdict& v) {
    const auto start = Clock::now();
    Scenario s;
    s.config.n = 32;
    s.config.k = 8;
    s.config.c = 4;
    s.config.m = 8;
    s.randomize_identities = true;
    s.trials = 1000;
    const auto exact = map_trials(
        s, seed_for(2, 0),
        [](const TrialRecord& t) {
            return t.outcome().status == SessionStatus::Delivered && t.outcome().recovered_message == t.sent_message
                       ? 1.0
                       : 0.0;
        },
        kThreads);
    double ok = 0;
    for (double x : exact) ok += x;
    const double elapsed = seconds_since(start);
    v.require(ok == 1000.0, "all sessions delivered exactly");
    v.require(elapsed < 10.0, "runtime < 10 s");
    v.detail << " exact=" << ok << "/1000 time=" << elapsed << "s";
}

void check_intercept_resend(Verdict& v) {
    double worst = 0.0;
    for (int theta0 = 0; theta0 < 360; ++theta0) {
        worst = std::max(worst, std::abs(intercept_decoy_survival(theta0) - 0.75));
    }
    v.require(worst <= 1e-10, "analytic survival 3/4");
    v.detail << " max|survival-3/4|=" << worst;
    int part = 0;
    for (std::size_t m : {1, 4, 8}) {
        v.row(simulate_row("intercept_detect", {{"m", double(m)}}, attack_scenario(4, m, InterceptResend{}),
                           seed_for(3, ++part), aborted_security));
    }
}

void check_impersonation(Verdict& v) {
    int part = 0;
    for (std::size_t k : {4, 8}) {
        const Params p{{"k", double(k)}};
        v.row(simulate_row("impersonate_alice_detect", p, attack_scenario(k, 4, ImpersonateAlice{}), seed_for(4, ++part),
                           [](const TrialRecord& t) {
                               return t.outcome().status == SessionStatus::AbortedAuthA ? 1.0 : 0.0;
                           }));
        const auto bob = attack_scenario(k, 4, ImpersonateBob{});
        const auto seed = seed_for(4, ++part);
        v.row(simulate_row("impersonate_bob_accept", p, bob, seed,
                           [](const TrialRecord& t) { return t.outcome().r_match ? 1.0 : 0.0; }));
        v.row(simulate_row("eve_idb1_guess", p, bob, seed, [](const TrialRecord& t) {
            return t.session.eve.guessed_id_b1 == t.session.true_id_b1 ? 1.0 : 0.0;
        }));
    }
}

void check_entangle(Verdict& v) {
    int part = 0;
    for (double f : {0.6, 0.8, 1.0}) {
        const double exact = entangle_decoy_pass_analytic(f);
        v.require(std::abs(exact - (f + 0.5) / 2.0) <= 1e-12, "analytic pass at F=" + std::to_string(f));
        v.row(simulate_row("entangle_decoy_pass", {{"F", f}}, attack_scenario(4, 4, EntangleMeasure{f}),
                           seed_for(5, ++part), decoy_pass));
    }
}

void check_denial_of_service(Verdict& v) {
    int part = 0;
    for (const PauliWeights& w : {PauliWeights{1, 0, 0, 0}, PauliWeights{0, 1, 0, 0}, PauliWeights{0.5, 0.5, 0.5, 0.5}}) {
        const double formula = (1 + w[0] * w[0] + (w[1] * w[1] + w[3] * w[3]) / 2) / 2;
        const double analytic = (1 + dos_pass_given_attack_analytic(w)) / 2;
        v.require(std::abs(analytic - formula) <= 1e-10, "analytic DoS pass");
        const Params p{{"w1", w[0]}, {"w2", w[1]}, {"w3", w[2]}, {"w4", w[3]}};
        v.row(simulate_row("dos_pass", p, attack_scenario(4, 4, DenialOfService{w}), seed_for(6, ++part),
                           decoy_pass));
    }
}

void check_man_in_the_middle(Verdict& v) {
    v.require(mitm_decoy_pass_analytic() == 0.5, "per-decoy pass = 1/2");
    int part = 0;
    for (std::size_t m : {2, 6, 10}) {
        v.row(simulate_row("mitm_detect", {{"m", double(m)}}, attack_scenario(4, m, ManInTheMiddle{}),
                           seed_for(7, ++part), aborted_security));
    }
}

void check_p_corr(Verdict& v) {
    std::size_t checked = 0;
    for (std::uint64_t l = 1; l <= 30; ++l) {
        for (std::uint64_t n = 1; n <= l; ++n) {
            v.require(binomial_power_bound(l, n), "C(l,n) >= (l/n)^n at l=" + std::to_string(l));
            ++checked;
        }
    }
    std::size_t applicable = 0;
    for (std::uint64_t n = 1; n <= 64; ++n) {
        for (std::uint64_t l = n; l <= 512; ++l) {
            const auto b = p_corr_bound(360, l, n);
            applicable += b.condition ? 1 : 0;
            v.require(b.bound_holds(), "p_corr bound at l=" + std::to_string(l) + " n=" + std::to_string(n));
        }
    }
    v.detail << " binomial pairs=" << checked << " bound cases=" << applicable;
}

void check_transcript_independence(Verdict& v) {
    Rng rng(seed_for(9, 0));
    int identical = 0;
    for (int i = 0; i < 100; ++i) {
        ProtocolConfig c;
        c.n = 1 + rng.below(24);
        c.c = rng.below(5);
        c.k = 2 * (1 + rng.below(6));
        c.m = 1 + rng.below(10);
        c.seed = rng();
        const PartyIdentities ids{BitString::random(c.k, rng), BitString::random(c.k, rng)};
        const auto a = run_session(c, ids, BitString::random(c.n, rng));
        const auto b = run_session(c, ids, BitString::random(c.n, rng));
        Json ja = Json::array();
        Json jb = Json::array();
        for (const auto& e : a.transcript) ja.push_back(e);
        for (const auto& e : b.transcript) jb.push_back(e);
        identical += canonical_dump(ja) == canonical_dump(jb) ? 1 : 0;
    }
    v.require(identical == 100, "byte-identical transcripts");
    v.detail << " identical=" << identical << "/100";
}

void check_noise_laws(Verdict& v) {
    DeviceModel d = DeviceModel::ideal();
    d.t1_us = 1.0;
    int part = 0;
    for (std::size_t gates : {1, 3, 7, 14, 28}) {
        const auto e = simulate_t1_survival(d, gates, kTrials, seed_for(10, ++part), kThreads);
        const double expected = std::exp(-static_cast<double>(gates) * d.gate_duration_ns / (d.t1_us * 1000.0));
        v.detail << " t1[" << gates << "]=" << e.point << " vs " << expected;
        v.require(std::abs(e.point - expected) <= 3 * e.std_error, "T1 survival at " + std::to_string(gates) + " gates");
    }
    const auto ro = simulate_readout(0.067, kTrials, seed_for(10, ++part), kThreads);
    v.detail << " readout=" << ro.point;
    v.require(std::abs(ro.point - 0.067) <= 3 * ro.std_error, "readout flip rate");
    const std::vector<std::size_t> ns{100, 150, 200, 250, 300, 350, 400};
    for (double gamma : {0.18, 0.21}) {
        const auto points = sweep_channel_length(ns, SyntheticSweep{gamma, 0.001}, kTrials, seed_for(10, ++part),
                                                 kThreads);
        const auto fit = fit_gamma(success_samples(points), 0.001);
        v.detail << " gamma " << gamma << "->" << fit.gamma;
        v.require(std::abs(fit.gamma - gamma) <= 0.05 * gamma, "gamma round trip");
    }
}

void check_ecc(Verdict& v) {
    for (bool bit : {false, true}) {
        for (std::size_t flip = 0; flip < 3; ++flip) {
            BitString out(3, bit);
            out.set(flip, !bit);
            v.require(decode_majority(out, 3) == bit, "single-flip correction");
        }
    }
    int part = 0;
    for (double p : {0.05, 0.1, 0.2}) {
        const Params params{{"d", 3}, {"p", p}};
        v.row(make_row("ecc_logical", params, 3 * p * p - 2 * p * p * p,
                       simulate_repetition(3, p, kTrials, seed_for(11, ++part), kThreads), 0.003));
    }
    v.require(threshold_check(1.0 / 3.0 - 1e-9, 3) && !threshold_check(1.0 / 3.0 + 1e-9, 3), "threshold at 1/3");
    const auto s = integrated_ecc_scenario(0.1, 3, 8, kTrials);
    const auto errors = map_trials(s, seed_for(11, ++part), message_bit_error, kThreads);
    const auto e = estimate_mean(errors);
    v.detail << " integrated=" << e.point;
    v.require(std::abs(e.point - 0.028) <= 0.005, "integrated per-bit error 0.028 +- 0.005");
}

void check_determinism(Verdict& v) {
    constexpr std::size_t trials = 10000;
    const Json config{{"seed", kMaster}, {"trials", trials}};
    const auto first = format_report(comparison_suite(kMaster, trials, 1), ReportFormat::Csv, config);
    const auto again = format_report(comparison_suite(kMaster, trials, 1), ReportFormat::Csv, config);
    const auto threaded = format_report(comparison_suite(kMaster, trials, 4), ReportFormat::Csv, config);
    v.require(first == again, "rerun identical");
    v.require(first == threaded, "identical across thread counts");
    v.detail << " report bytes=" << first.size();
}

}  // namespace
}  // namespace qsdc

int main() {
    using namespace qsdc;
    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
        {"reference session reproduction", check_reference_session},
        {"honest round trip", check_honest_round_trip},
        {"intercept-resend", check_intercept_resend},
        {"impersonation", check_impersonation},
        {"entangle-and-measure", check_entangle},
        {"denial of service", check_denial_of_service},
        {"man in the middle", check_man_in_the_middle},
        {"p_corr bound", check_p_corr},
        {"transcript message-independence", check_transcript_independence},
        {"noise laws", check_noise_laws},
        {"error correction", check_ecc},
        {"determinism", check_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            criteria[i].second(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " [exception: " << e.what() << "]";
        }
        failed += v.pass ? 0 : 1;
        std::printf("%s %2zu %s:%s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    v.detail.str().c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
