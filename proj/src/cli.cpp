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

#include "qsdc/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "qsdc/adversary.hpp"
#include "qsdc/analysis.hpp"
#include "qsdc/ecc.hpp"

namespace qsdc {

namespace {

constexpr std::size_t kDefaultAttackTrials = 10000;
constexpr std::size_t kDefaultSuiteTrials = 100000;
constexpr std::size_t kDefaultSweepTrials = 10000;

// Flags shared by the session-level subcommands. Only flags actually given
// end up in the effective configuration.
struct ProtocolFlags {
    std::optional<std::size_t> n, c, k, m;
    std::optional<double> decoy_threshold, auth_threshold, check_threshold;
};

struct AttackFlags {
    std::optional<std::string> model;
    std::optional<double> theta0, fidelity;
    std::optional<std::string> weights;
};

struct ChannelFlags {
    std::optional<std::size_t> gates;
    std::optional<std::string> kind;
    std::optional<double> p_error, gate_ns, t1_us, readout, calibration;
};

struct EccFlags {
    std::optional<int> distance;
    bool interleave = false;
};

struct Flags {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> config, out, format;
    unsigned threads = 1;

    ProtocolFlags protocol;
    AttackFlags attack;
    ChannelFlags channel;
    EccFlags ecc;

    // run
    std::optional<std::string> message, id_a, id_b, r;
    std::optional<int> theta;
    // sweep
    std::optional<std::string> n_values, source;
    std::optional<double> gamma;
    std::optional<bool> bit;
    bool fit = false;
    // ecc
    std::optional<double> p, success_threshold;
    // fit-gamma
    std::optional<std::string> input, samples;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON configuration file (flags take precedence)");
    app->add_option("--seed", f.seed, "Master seed (default: $QSDC_SEED, else 0)");
    app->add_option("--out", f.out, "Output path");
    app->add_option("--format", f.format, "Report format: csv or json");
    app->add_option("--threads", f.threads, "Worker threads (0 = all cores); never changes results");
    app->add_flag("-v,--verbose", "More output");
}

void add_protocol(CLI::App* app, ProtocolFlags& f) {
    app->add_option("--n", f.n, "Message length");
    app->add_option("--c", f.c, "Check bits");
    app->add_option("--k", f.k, "Identity length (even)");
    app->add_option("--m", f.m, "Decoy photons");
    app->add_option("--decoy-threshold", f.decoy_threshold, "Decoy error threshold");
    app->add_option("--auth-threshold", f.auth_threshold, "Id_A error threshold");
    app->add_option("--check-threshold", f.check_threshold, "Check-bit error threshold");
}

void add_attack(CLI::App* app, AttackFlags& f) {
    app->add_option("--model", f.model,
                    "none, impersonate_alice, impersonate_bob, intercept_resend, entangle, dos or mitm");
    app->add_option("--theta0", f.theta0, "Intercept-resend basis angle in degrees");
    app->add_option("--fidelity", f.fidelity, "Entangling attack fidelity F");
    app->add_option("--weights", f.weights, "DoS Pauli weights w1,w2,w3,w4");
}

void add_channel(CLI::App* app, ChannelFlags& f) {
    app->add_option("--gates", f.gates, "Identity gates in the channel");
    app->add_option("--kind", f.kind, "bit_flip, amplitude_damping or depolarizing");
    app->add_option("--p-error", f.p_error, "Per-gate error probability");
    app->add_option("--gate-ns", f.gate_ns, "Gate duration in ns");
    app->add_option("--t1-us", f.t1_us, "T1 in microseconds");
    app->add_option("--readout", f.readout, "Readout flip probability");
    app->add_option("--calibration", f.calibration, "Encoding rotation offset in degrees");
}

void add_ecc(CLI::App* app, EccFlags& f) {
    app->add_option("--distance", f.distance, "Repetition code distance (odd)");
    app->add_flag("--interleave", "Interleave repetition copies");
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("malformed number '" + item + "'");
    }
    return out;
}

Json default_document(Command command) {
    Json doc;
    doc["seed"] = 0;
    if (const char* env = std::getenv("QSDC_SEED")) {
        try {
            std::size_t used = 0;
            const std::string s(env);
            doc["seed"] = std::stoull(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
        } catch (const std::exception&) {
            throw UsageError("QSDC_SEED must be an unsigned 64-bit integer");
        }
    }
    Json protocol = ProtocolConfig{};
    protocol.erase("seed");
    switch (command) {
        case Command::Run:
            doc["protocol"] = protocol;
            doc["identities"] = nullptr;
            doc["message"] = nullptr;
            doc["theta"] = nullptr;
            doc["r"] = nullptr;
            doc["attack"] = AttackModel{NoAttack{}};
            doc["channel"] = ChannelModel::ideal();
            doc["ecc"] = nullptr;
            doc["interleave"] = false;
            break;
        case Command::Attack:
            doc["trials"] = kDefaultAttackTrials;
            doc["protocol"] = protocol;
            doc["attack"] = nullptr;
            doc["channel"] = ChannelModel::ideal();
            doc["ecc"] = nullptr;
            doc["interleave"] = false;
            break;
        case Command::Suite:
            doc["trials"] = kDefaultSuiteTrials;
            break;
        case Command::Sweep: {
            doc["trials"] = kDefaultSweepTrials;
            ChannelModel ch;
            ch.device = DeviceModel{};
            doc["channel"] = ch;
            doc["sweep"] = Json{{"n_values", {100, 150, 200, 250, 300, 350, 400}},
                                {"source", "synthetic"},
                                {"gamma", 0.2},
                                {"bit", false},
                                {"fit", false}};
            break;
        }
        case Command::Ecc:
            doc["trials"] = 0;
            doc["ecc"] = Json{{"distance", 3}};
            doc["p"] = 0.1;
            doc["gamma"] = nullptr;
            doc["p_error"] = DeviceModel{}.gate_error;
            doc["success_threshold"] = 2.0 / 3.0;
            break;
        case Command::FitGamma:
            doc["p_error"] = DeviceModel{}.gate_error;
            doc["samples"] = Json::array();
            break;
    }
    return doc;
}

void apply_protocol_flags(Json& doc, const ProtocolFlags& f) {
    Json& p = doc["protocol"];
    if (f.n) p["n"] = *f.n;
    if (f.c) p["c"] = *f.c;
    if (f.k) p["k"] = *f.k;
    if (f.m) p["m"] = *f.m;
    if (f.decoy_threshold) p["decoy_error_threshold"] = *f.decoy_threshold;
    if (f.auth_threshold) p["auth_error_threshold"] = *f.auth_threshold;
    if (f.check_threshold) p["check_bit_error_threshold"] = *f.check_threshold;
}

void apply_attack_flags(Json& doc, const AttackFlags& f) {
    if (f.model) doc["attack"] = AttackModel(attack_from_name(*f.model));
    if (!f.theta0 && !f.fidelity && !f.weights) return;
    if (!doc["attack"].is_object()) throw UsageError("attack parameters need --model");
    Json& a = doc["attack"];
    const auto model = a.value("model", std::string());
    if (f.theta0) {
        if (model != "intercept_resend") throw UsageError("--theta0 applies to intercept_resend only");
        a["theta0"] = *f.theta0;
    }
    if (f.fidelity) {
        if (model != "entangle") throw UsageError("--fidelity applies to entangle only");
        a["fidelity"] = *f.fidelity;
    }
    if (f.weights) {
        if (model != "dos") throw UsageError("--weights applies to dos only");
        const auto w = parse_number_list(*f.weights);
        if (w.size() != 4) throw UsageError("--weights needs four comma-separated numbers");
        a["weights"] = w;
    }
}

void apply_channel_flags(Json& doc, const ChannelFlags& f) {
    Json& ch = doc["channel"];
    if (!ch.is_object()) ch = ChannelModel::ideal();
    if (f.gates) ch["n_gates"] = *f.gates;
    if (f.kind) ch["kind"] = *f.kind;
    Json& d = ch["device"];
    if (f.p_error) d["gate_error"] = *f.p_error;
    if (f.gate_ns) d["gate_duration_ns"] = *f.gate_ns;
    if (f.t1_us) d["t1_us"] = *f.t1_us;
    if (f.readout) d["readout_error"] = *f.readout;
    if (f.calibration) d["calibration_offset_deg"] = *f.calibration;
}

void apply_ecc_flags(Json& doc, const EccFlags& f) {
    if (f.distance) doc["ecc"] = Json{{"distance", *f.distance}};
    if (f.interleave) doc["interleave"] = true;
}

void require_keys(const Json& doc, std::initializer_list<std::string_view> known) {
    for (const auto& item : doc.items()) {
        bool ok = false;
        for (auto k : known) ok = ok || item.key() == k;
        if (!ok) throw UsageError("unknown configuration key '" + item.key() + "'");
    }
}

std::vector<std::string_view> allowed_keys(Command command) {
    switch (command) {
        case Command::Run:
            return {"seed", "protocol", "identities", "message", "theta", "r", "attack", "channel", "ecc",
                    "interleave"};
        case Command::Attack:
            return {"seed", "trials", "protocol", "attack", "channel", "ecc", "interleave"};
        case Command::Suite:
            return {"seed", "trials"};
        case Command::Sweep:
            return {"seed", "trials", "channel", "sweep"};
        case Command::Ecc:
            return {"seed", "trials", "ecc", "p", "gamma", "p_error", "success_threshold"};
        case Command::FitGamma:
            return {"p_error", "samples"};
    }
    return {};
}

// ---------------------------------------------------------------------------
// Typed views of the effective document

std::uint64_t seed_of(const Json& doc) { return doc.at("seed").get<std::uint64_t>(); }

std::size_t trials_of(const Json& doc) {
    const auto t = doc.at("trials").get<std::size_t>();
    return t;
}

ProtocolConfig protocol_of(const Json& doc) {
    ProtocolConfig config = doc.at("protocol").get<ProtocolConfig>();
    config.seed = seed_of(doc);
    return config;
}

ChannelModel channel_of(const Json& doc) { return doc.at("channel").get<ChannelModel>(); }

std::optional<RepetitionCode> ecc_of(const Json& doc) {
    if (!doc.contains("ecc") || doc.at("ecc").is_null()) return std::nullopt;
    return repetition_code_from_json(doc.at("ecc"));
}

SessionOptions options_of(const Json& doc, const ChannelModel& channel) {
    SessionOptions options;
    options.readout_error = channel.device.readout_error;
    options.calibration_offset_deg = channel.device.calibration_offset_deg;
    options.repetition = ecc_of(doc);
    options.interleave_copies = doc.value("interleave", false);
    return options;
}

struct RunSpec {
    ProtocolConfig config;
    PartyIdentities identities;
    BitString message;
    AttackModel attack;
    ChannelModel channel;
    SessionOptions options;
};

RunSpec run_spec_of(const Json& doc) {
    RunSpec s;
    if (doc.at("message").is_null()) throw UsageError("run needs --message");
    if (doc.at("identities").is_null()) throw UsageError("run needs --id-a and --id-b");
    s.config = protocol_of(doc);
    s.identities = doc.at("identities").get<PartyIdentities>();
    s.message = doc.at("message").get<BitString>();
    s.attack = attack_from_json(doc.at("attack"));
    s.channel = channel_of(doc);
    s.options = options_of(doc, s.channel);
    if (!doc.at("theta").is_null()) s.options.overrides.theta = doc.at("theta").get<int>();
    if (!doc.at("r").is_null()) s.options.overrides.r = doc.at("r").get<BitString>();
    s.config.validate();
    s.identities.validate(s.config);
    s.channel.validate();
    return s;
}

Scenario attack_scenario_of(const Json& doc) {
    if (doc.at("attack").is_null()) throw UsageError("attack needs --model");
    Scenario s;
    s.config = protocol_of(doc);
    s.randomize_identities = true;
    s.attack = attack_from_json(doc.at("attack"));
    s.channel = channel_of(doc);
    s.ecc = ecc_of(doc);
    s.interleave_copies = doc.value("interleave", false);
    s.trials = trials_of(doc);
    s.validate();
    return s;
}

void validate_document(Command command, const Json& doc) {
    switch (command) {
        case Command::Run:
            (void)run_spec_of(doc);
            break;
        case Command::Attack:
            (void)attack_scenario_of(doc);
            break;
        case Command::Suite:
            if (trials_of(doc) < 10000) throw UsageError("suite needs --trials >= 10000");
            break;
        case Command::Sweep: {
            channel_of(doc).validate();
            const Json& sw = doc.at("sweep");
            const auto source = sw.at("source").get<std::string>();
            if (source != "synthetic" && source != "device") throw UsageError("--source is synthetic or device");
            if (trials_of(doc) < 1) throw UsageError("sweep needs --trials >= 1");
            break;
        }
        case Command::Ecc:
            (void)ecc_of(doc);
            if (!ecc_of(doc)) throw UsageError("ecc needs a distance");
            break;
        case Command::FitGamma:
            if (doc.at("samples").size() < 2) throw UsageError("fit-gamma needs --input or --samples");
            break;
    }
}

// ---------------------------------------------------------------------------
// Subcommands

std::string describe(const SessionOutcome& o) {
    if (o.status == SessionStatus::Delivered) return "Delivered M=" + o.recovered_message->str();
    std::string s(to_string(o.status));
    if (!o.transcript.empty()) {
        if (const auto* a = std::get_if<Abort>(&o.transcript.back().message)) s += " (" + a->reason + ")";
    }
    return s;
}

int do_run(const CliConfig& cli, std::ostream& out) {
    const RunSpec s = run_spec_of(cli.effective);
    const AttackedSession session =
        run_attacked_session(s.config, s.identities, s.message, s.attack, s.channel, s.options);
    out << describe(session.outcome) << "\n";
    if (cli.verbosity > 0) {
        for (const auto& entry : session.outcome.transcript) out << "  " << canonical_dump(Json(entry)) << "\n";
    }
    if (cli.output_path) {
        Json doc = session_document(s.config, s.identities, s.message, session.outcome);
        doc["effective_config"] = cli.effective;
        write_text_file(*cli.output_path, doc.dump(2) + "\n");
    }
    return kExitOk;
}

struct AttackRowSpec {
    std::string quantity;
    Params params;
    std::function<double(const TrialRecord&)> metric;
    bool mean = false;
};

double aborted_security(const TrialRecord& t) {
    return t.outcome().status == SessionStatus::AbortedSecurityCheck ? 1.0 : 0.0;
}
double decoy_pass(const TrialRecord& t) { return 1.0 - t.outcome().decoy_error_rate; }

std::vector<AttackRowSpec> attack_rows(const Scenario& s) {
    const auto k = static_cast<double>(s.config.k);
    const auto m = static_cast<double>(s.config.m);
    std::vector<AttackRowSpec> rows;
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, ImpersonateAlice>) {
                rows.push_back({"impersonate_alice_detect", {{"k", k}}, [](const TrialRecord& t) {
                                    return t.outcome().status == SessionStatus::AbortedAuthA ? 1.0 : 0.0;
                                }});
            } else if constexpr (std::is_same_v<T, ImpersonateBob>) {
                rows.push_back({"impersonate_bob_accept", {{"k", k}},
                                [](const TrialRecord& t) { return t.outcome().r_match ? 1.0 : 0.0; }});
                rows.push_back({"eve_idb1_guess", {{"k", k}}, [](const TrialRecord& t) {
                                    return t.session.eve.guessed_id_b1 == t.session.true_id_b1 ? 1.0 : 0.0;
                                }});
            } else if constexpr (std::is_same_v<T, InterceptResend>) {
                rows.push_back({"intercept_detect", {{"m", m}}, aborted_security});
                rows.push_back({"intercept_decoy_survival", {}, decoy_pass, true});
            } else if constexpr (std::is_same_v<T, EntangleMeasure>) {
                rows.push_back({"entangle_detect", {{"F", a.fidelity}, {"m", m}}, aborted_security});
                rows.push_back({"entangle_decoy_pass", {{"F", a.fidelity}}, decoy_pass, true});
            } else if constexpr (std::is_same_v<T, DenialOfService>) {
                Params w{{"w1", a.weights[0]}, {"w2", a.weights[1]}, {"w3", a.weights[2]}, {"w4", a.weights[3]}};
                Params wm = w;
                wm["m"] = m;
                rows.push_back({"dos_detect", wm, aborted_security});
                rows.push_back({"dos_pass", w, decoy_pass, true});
            } else if constexpr (std::is_same_v<T, ManInTheMiddle>) {
                rows.push_back({"mitm_detect", {{"m", m}}, aborted_security});
                rows.push_back({"mitm_decoy_pass", {}, decoy_pass, true});
            }
        },
        s.attack);
    return rows;
}

void write_or_print(const CliConfig& cli, const std::string& text, std::ostream& out) {
    if (cli.output_path) {
        write_text_file(*cli.output_path, text);
    } else {
        out << text;
    }
}

int do_attack(const CliConfig& cli, std::ostream& out) {
    const Scenario s = attack_scenario_of(cli.effective);
    const std::uint64_t seed = seed_of(cli.effective);
    std::vector<ComparisonRow> rows;
    const auto specs = attack_rows(s);
    if (specs.empty()) {
        const auto delivered = map_trials(
            s, seed, [](const TrialRecord& t) { return t.outcome().status == SessionStatus::Delivered ? 1.0 : 0.0; },
            cli.threads);
        const auto e = estimate_mean(delivered);
        out << "model=" << attack_name(s.attack) << " trials=" << s.trials << " delivered=" << e.point << "\n";
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& plan = specs[i];
        const auto values = map_trials(s, seed, plan.metric, cli.threads);
        const EstimateWithCI e = estimate_mean(values);
        rows.push_back(make_row(plan.quantity, plan.params, closed_form(plan.quantity, plan.params), e));
        const auto& r = rows.back();
        out << r.quantity << ": simulated=" << e.point << " stderr=" << e.std_error << " closed_form=" << r.closed_form
            << " pass=" << (r.pass ? "true" : "false") << "\n";
    }
    if (cli.output_path) emit_report(rows, cli.format, *cli.output_path, cli.effective);
    return kExitOk;
}

int do_suite(const CliConfig& cli, std::ostream& out) {
    const auto rows = comparison_suite(seed_of(cli.effective), trials_of(cli.effective), cli.threads);
    std::size_t passed = 0;
    for (const auto& r : rows) passed += r.pass ? 1 : 0;
    const std::string report = format_report(rows, cli.format, cli.effective);
    if (cli.output_path) {
        write_text_file(*cli.output_path, report);
        out << passed << "/" << rows.size() << " rows within tolerance\n";
    } else {
        out << report;
    }
    return kExitOk;
}

int do_sweep(const CliConfig& cli, std::ostream& out) {
    const Json& doc = cli.effective;
    const Json& sw = doc.at("sweep");
    std::vector<std::size_t> n_values = sw.at("n_values").get<std::vector<std::size_t>>();
    const ChannelModel channel = channel_of(doc);
    SweepSource source;
    if (sw.at("source").get<std::string>() == "synthetic") {
        source = SyntheticSweep{sw.at("gamma").get<double>(), channel.device.gate_error};
    } else {
        source = DeviceSweep{channel.kind, channel.device, sw.at("bit").get<bool>()};
    }
    const auto points = sweep_channel_length(n_values, source, trials_of(doc), seed_of(doc), cli.threads);
    std::optional<GammaFit> fit;
    if (sw.at("fit").get<bool>()) {
        const auto samples = success_samples(points);
        fit = fit_gamma(samples, channel.device.gate_error);
    }
    write_or_print(cli, format_sweep(points, cli.format, doc, fit), out);
    if (fit && cli.output_path) out << "gamma=" << fit->gamma << " residual=" << fit->residual << "\n";
    return kExitOk;
}

int do_ecc(const CliConfig& cli, std::ostream& out) {
    const Json& doc = cli.effective;
    const RepetitionCode code = *ecc_of(doc);
    const double p = doc.at("p").get<double>();
    const int d = code.distance();
    const double logical = logical_error_rate(d, p);
    out << "distance=" << d << " p=" << p << " logical_rate=" << logical << "\n";
    out << "threshold: " << (threshold_check(p, d) ? "below" : "not below")
        << " (leading-order threshold " << leading_order_threshold(d) << ", exact break-even "
        << exact_break_even(d) << ")\n";
    std::vector<ComparisonRow> rows;
    const auto trials = trials_of(doc);
    if (trials > 0) {
        const auto e = simulate_repetition(d, p, trials, seed_of(doc), cli.threads);
        const Params params{{"d", static_cast<double>(d)}, {"p", p}};
        rows.push_back(make_row("ecc_logical", params, closed_form("ecc_logical", params), e, 0.003));
        out << "simulated logical_rate=" << e.point << " stderr=" << e.std_error << "\n";
    }
    if (!doc.at("gamma").is_null()) {
        const double gamma = doc.at("gamma").get<double>();
        const double p_error = doc.at("p_error").get<double>();
        const double thr = doc.at("success_threshold").get<double>();
        out << "max_channel_length=" << max_channel_length(gamma, p_error, thr) << " (gamma=" << gamma
            << ", p_error=" << p_error << ", threshold=" << thr << ")\n";
    }
    if (cli.output_path) emit_report(rows, cli.format, *cli.output_path, doc);
    return kExitOk;
}

int do_fit_gamma(const CliConfig& cli, std::ostream& out) {
    const Json& doc = cli.effective;
    std::vector<SuccessSample> samples;
    for (const auto& s : doc.at("samples")) samples.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
    const GammaFit fit = fit_gamma(samples, doc.at("p_error").get<double>());
    out << "gamma=" << fit.gamma << " residual=" << fit.residual << "\n";
    if (cli.output_path) {
        Json j{{"gamma", fit.gamma}, {"residual", fit.residual}, {"effective_config", doc}};
        write_text_file(*cli.output_path, j.dump(2) + "\n");
    }
    return kExitOk;
}

// Reads "n,point,..." rows as written by format_sweep.
Json samples_from_sweep_csv(const std::string& text) {
    Json samples = Json::array();
    std::stringstream ss(text);
    std::string line;
    bool header = false;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line.rfind("n,point", 0) != 0) throw UsageError("sweep input lacks the n,point header");
            header = true;
            continue;
        }
        const auto cells = parse_number_list(line);
        if (cells.size() < 2) throw UsageError("malformed sweep row: " + line);
        samples.push_back({cells[0], cells[1]});
    }
    return samples;
}

Json samples_from_flag(const std::string& text) {
    Json samples = Json::array();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw UsageError("--samples expects n:success pairs");
        samples.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    }
    return samples;
}

}  // namespace

std::string_view to_string(Command command) {
    switch (command) {
        case Command::Run:
            return "run";
        case Command::Attack:
            return "attack";
        case Command::Suite:
            return "suite";
        case Command::Sweep:
            return "sweep";
        case Command::Ecc:
            return "ecc";
        case Command::FitGamma:
            return "fit-gamma";
    }
    return "run";
}

CliConfig parse_args(int argc, const char* const* argv) {
    CLI::App app{"Simulator and analysis lab for single-basis QSDC with mutual authentication", "qsdc"};
    app.require_subcommand(1);
    Flags f;

    auto* run = app.add_subcommand("run", "Run one session and write its transcript");
    add_common(run, f);
    add_protocol(run, f.protocol);
    add_attack(run, f.attack);
    add_channel(run, f.channel);
    add_ecc(run, f.ecc);
    run->add_option("--message", f.message, "Message bits, e.g. 011101");
    run->add_option("--id-a", f.id_a, "Alice's identity bits");
    run->add_option("--id-b", f.id_b, "Bob's identity bits");
    run->add_option("--theta", f.theta, "Encoding angle in degrees (1..360); drawn when absent");
    run->add_option("--r", f.r, "Alice's k-bit r; drawn when absent");

    auto* attack = app.add_subcommand("attack", "Estimate an attack's detection statistics");
    add_common(attack, f);
    add_protocol(attack, f.protocol);
    add_attack(attack, f.attack);
    add_channel(attack, f.channel);
    add_ecc(attack, f.ecc);
    attack->add_option("--trials", f.trials, "Sessions to simulate");

    auto* suite = app.add_subcommand("suite", "Compare every closed form with simulation");
    add_common(suite, f);
    suite->add_option("--trials", f.trials, "Trials per row (>= 10000)");

    auto* sweep = app.add_subcommand("sweep", "Success probability against channel length");
    add_common(sweep, f);
    add_channel(sweep, f.channel);
    sweep->add_option("--trials", f.trials, "Trials per channel length");
    sweep->add_option("--n-values", f.n_values, "Comma-separated channel lengths");
    sweep->add_option("--source", f.source, "synthetic or device");
    sweep->add_option("--gamma", f.gamma, "Gamma of the synthetic generator");
    sweep->add_option("--bit", f.bit, "Prepared bit for device sweeps");
    sweep->add_flag("--fit", "Fit gamma to the sweep");

    auto* ecc = app.add_subcommand("ecc", "Repetition-code rates and thresholds");
    add_common(ecc, f);
    ecc->add_option("--distance", f.ecc.distance, "Code distance (odd)");
    ecc->add_option("--p", f.p, "Physical flip probability");
    ecc->add_option("--trials", f.trials, "Monte Carlo trials (0 = none)");
    ecc->add_option("--gamma", f.gamma, "Gamma for the maximal channel length");
    ecc->add_option("--p-error", f.channel.p_error, "Per-gate error for the maximal channel length");
    ecc->add_option("--success-threshold", f.success_threshold, "Required success probability");

    auto* fit = app.add_subcommand("fit-gamma", "Fit gamma to (n, success) samples");
    add_common(fit, f);
    fit->add_option("--input", f.input, "Sweep CSV to fit");
    fit->add_option("--samples", f.samples, "Inline samples n:success,n:success,...");
    fit->add_option("--p-error", f.channel.p_error, "Per-gate error probability");

    CliConfig cli;
    if (argc <= 1) throw UsageError(app.help());
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        cli.help_text = app.help();
        return cli;
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string(e.what()) + "\n" + app.help());
    }

    const std::pair<CLI::App*, Command> table[] = {{run, Command::Run},     {attack, Command::Attack},
                                                   {suite, Command::Suite}, {sweep, Command::Sweep},
                                                   {ecc, Command::Ecc},     {fit, Command::FitGamma}};
    CLI::App* chosen = nullptr;
    for (const auto& [sub, cmd] : table) {
        if (sub->parsed()) {
            cli.command = cmd;
            chosen = sub;
        }
    }
    if (chosen == nullptr) throw UsageError(app.help());
    // CLI11 reports --help on a subcommand through the subcommand itself.
    if (chosen->get_help_ptr() != nullptr && chosen->get_help_ptr()->count() > 0) {
        cli.help_text = chosen->help();
        return cli;
    }

    cli.config_path = f.config;
    cli.output_path = f.out;
    cli.threads = f.threads;
    cli.verbosity = static_cast<int>(chosen->count("--verbose"));
    if (cli.command == Command::Run || cli.command == Command::Attack) {
        f.ecc.interleave = chosen->count("--interleave") > 0;
    }
    f.fit = cli.command == Command::Sweep && chosen->count("--fit") > 0;
    try {
        if (f.format) cli.format = report_format_from_string(*f.format);

        Json doc = default_document(cli.command);
        if (f.config) {
            Json file;
            try {
                file = Json::parse(read_text_file(*f.config));
            } catch (const Json::exception& e) {
                throw UsageError("malformed config file '" + *f.config + "': " + e.what());
            } catch (const std::runtime_error& e) {
                throw UsageError(e.what());
            }
            if (!file.is_object()) throw UsageError("config file must hold a JSON object");
            const auto keys = allowed_keys(cli.command);
            for (const auto& item : file.items()) {
                if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
                    throw UsageError("unknown configuration key '" + item.key() + "'");
                }
            }
            doc.merge_patch(file);
            if (doc.contains("protocol") && doc["protocol"].is_object()) {
                const Json defaults = default_document(cli.command)["protocol"];
                for (const auto& item : defaults.items()) {
                    if (!doc["protocol"].contains(item.key())) doc["protocol"][item.key()] = item.value();
                }
            }
        }

        if (f.seed) doc["seed"] = *f.seed;
        if (f.trials) doc["trials"] = *f.trials;
        switch (cli.command) {
            case Command::Run:
            case Command::Attack:
                apply_protocol_flags(doc, f.protocol);
                apply_attack_flags(doc, f.attack);
                apply_channel_flags(doc, f.channel);
                apply_ecc_flags(doc, f.ecc);
                break;
            case Command::Sweep:
                apply_channel_flags(doc, f.channel);
                if (f.n_values) {
                    std::vector<std::size_t> ns;
                    for (double v : parse_number_list(*f.n_values)) {
                        if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
                            throw UsageError("--n-values must be non-negative integers");
                        }
                        ns.push_back(static_cast<std::size_t>(v));
                    }
                    doc["sweep"]["n_values"] = ns;
                }
                if (f.source) doc["sweep"]["source"] = *f.source;
                if (f.gamma) doc["sweep"]["gamma"] = *f.gamma;
                if (f.bit) doc["sweep"]["bit"] = *f.bit;
                if (f.fit) doc["sweep"]["fit"] = true;
                break;
            case Command::Ecc:
                if (f.ecc.distance) doc["ecc"] = Json{{"distance", *f.ecc.distance}};
                if (f.p) doc["p"] = *f.p;
                if (f.gamma) doc["gamma"] = *f.gamma;
                if (f.channel.p_error) doc["p_error"] = *f.channel.p_error;
                if (f.success_threshold) doc["success_threshold"] = *f.success_threshold;
                break;
            case Command::FitGamma:
                if (f.channel.p_error) doc["p_error"] = *f.channel.p_error;
                if (f.input) doc["samples"] = samples_from_sweep_csv(read_text_file(*f.input));
                if (f.samples) doc["samples"] = samples_from_flag(*f.samples);
                break;
            case Command::Suite:
                break;
        }
        if (cli.command == Command::Run) {
            if (f.message) doc["message"] = *f.message;
            if (f.id_a || f.id_b) {
                if (!f.id_a || !f.id_b) throw UsageError("--id-a and --id-b go together");
                doc["identities"] = Json{{"id_a", *f.id_a}, {"id_b", *f.id_b}};
            }
            if (f.theta) doc["theta"] = *f.theta;
            if (f.r) doc["r"] = *f.r;
            // The message and identities fix n and k.
            if (doc["message"].is_string()) doc["protocol"]["n"] = doc["message"].get<std::string>().size();
            if (doc["identities"].is_object() && doc["identities"].contains("id_a")) {
                doc["protocol"]["k"] = doc["identities"]["id_a"].get<std::string>().size();
            }
        }
        require_keys(doc, {"seed", "trials", "protocol", "identities", "message", "theta", "r", "attack", "channel",
                           "ecc", "interleave", "sweep", "p", "gamma", "p_error", "success_threshold", "samples"});
        validate_document(cli.command, doc);
        cli.effective = std::move(doc);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    return cli;
}

int execute(const CliConfig& cli, std::ostream& out, std::ostream& err) {
    if (cli.help_text) {
        out << *cli.help_text;
        return kExitOk;
    }
    try {
        if (cli.verbosity > 0) err << "effective config: " << canonical_dump(cli.effective) << "\n";
        switch (cli.command) {
            case Command::Run:
                return do_run(cli, out);
            case Command::Attack:
                return do_attack(cli, out);
            case Command::Suite:
                return do_suite(cli, out);
            case Command::Sweep:
                return do_sweep(cli, out);
            case Command::Ecc:
                return do_ecc(cli, out);
            case Command::FitGamma:
                return do_fit_gamma(cli, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig cli;
    try {
        cli = parse_args(argc, argv);
    } catch (const UsageError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return execute(cli, out, err);
}

}  // namespace qsdc
