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

#include <cstdlib>
#include <filesystem>

#include "qsdc/report.hpp"
#include "qsdc/serialization.hpp"

namespace qsdc {
namespace {

SessionOutcome reference_session(ProtocolConfig& config, PartyIdentities& ids, BitString& message) {
    ids = {BitString::parse("1100"), BitString::parse("0111")};
    message = BitString::parse("011101");
    SessionOptions o;
    o.overrides.theta = 7;
    o.overrides.r = BitString::parse("1001");
    o.overrides.check_positions = std::vector<std::size_t>{1, 4};
    o.overrides.check_values = BitString::parse("10");
    o.overrides.decoys = std::vector<DecoyDescriptor>{
        {BasisChoice::Z, false}, {BasisChoice::Z, true}, {BasisChoice::X, false}, {BasisChoice::Z, false}};
    o.overrides.insertion = InsertionPlan{{2, 4}, {1, 4, 8, 12}, {6, 8, 13}, {1, 3, 14, 18}};
    return run_session(config, ids, message, {}, o);
}

TEST(SerializationTest, ConfigRoundTrip) {
    ProtocolConfig c;
    c.n = 9;
    c.k = 6;
    c.decoy_error_threshold = 0.125;
    c.seed = 123456789012345ULL;
    const Json j = c;
    EXPECT_EQ(j.get<ProtocolConfig>(), c);
}

TEST(SerializationTest, PartialConfigKeepsDefaults) {
    const auto c = Json::parse(R"({"m": 9})").get<ProtocolConfig>();
    EXPECT_EQ(c.m, 9u);
    EXPECT_EQ(c.n, ProtocolConfig{}.n);
}

TEST(SerializationTest, UnknownKeysRejected) {
    EXPECT_ANY_THROW(Json::parse(R"({"mm": 9})").get<ProtocolConfig>());
    EXPECT_ANY_THROW(Json::parse(R"({"gate_eror": 0.1})").get<DeviceModel>());
}

TEST(SerializationTest, ChannelAndAttackRoundTrip) {
    ChannelModel ch;
    ch.kind = GateErrorKind::AmplitudeDamping;
    ch.n_gates = 12;
    ch.device.t1_us = 80;
    EXPECT_EQ(Json(ch).get<ChannelModel>(), ch);
    for (const AttackModel& a :
         {AttackModel{NoAttack{}}, AttackModel{InterceptResend{45.0}}, AttackModel{InterceptResend{}},
          AttackModel{EntangleMeasure{0.6}}, AttackModel{DenialOfService{{0.5, 0.5, 0.5, 0.5}}},
          AttackModel{ManInTheMiddle{}}, AttackModel{ImpersonateBob{}}}) {
        EXPECT_EQ(attack_from_json(Json(a)), a);
    }
    EXPECT_ANY_THROW(attack_from_json(Json::parse(R"({"model": "telepathy"})")));
}

TEST(SerializationTest, QubitAndCodeRoundTrip) {
    const auto q = apply(rotation_gate(7.0), ket1());
    const auto back = qubit_from_json(Json(q));
    EXPECT_NEAR((back.amplitudes() - q.amplitudes()).norm(), 0.0, 1e-15);
    EXPECT_EQ(repetition_code_from_json(Json(RepetitionCode(5))).distance(), 5);
    EXPECT_ANY_THROW(repetition_code_from_json(Json::parse(R"({"distance": 4})")));
}

TEST(SerializationTest, OutcomeRoundTrip) {
    ProtocolConfig c;
    PartyIdentities ids;
    BitString m;
    const auto out = reference_session(c, ids, m);
    const Json j = out;
    EXPECT_EQ(j.get<SessionOutcome>(), out);
    EXPECT_EQ(canonical_dump(Json::parse(canonical_dump(j))), canonical_dump(j));
}

TEST(SerializationTest, AbortedOutcomeRoundTrip) {
    ProtocolConfig c;
    c.seed = 3;
    const PartyIdentities ids{BitString::parse("1100"), BitString::parse("0111")};
    auto wipe = [](std::vector<Qubit>& q, Rng&) {
        for (auto& s : q) s = ket1();
    };
    const auto out = run_session(c, ids, BitString::parse("000000"), wipe);
    ASSERT_NE(out.status, SessionStatus::Delivered);
    EXPECT_EQ(Json(out).get<SessionOutcome>(), out);
}

TEST(GoldenTest, ReferenceSessionSessionDocument) {
    ProtocolConfig c;
    PartyIdentities ids;
    BitString m;
    const auto out = reference_session(c, ids, m);
    const std::string text = session_document(c, ids, m, out).dump(2) + "\n";
    const std::string path = std::string(QSDC_GOLDEN_DIR) + "/example_session.json";
    if (std::getenv("QSDC_UPDATE_GOLDEN") != nullptr) write_text_file(path, text);
    EXPECT_EQ(read_text_file(path), text);
}

ComparisonRow sample_row() {
    EstimateWithCI e;
    e.point = 0.1234567890123456789;
    e.std_error = 1.0 / 3.0;
    e.n_trials = 100000;
    e.ci_low = 0.01;
    e.ci_high = 0.2;
    return make_row("intercept_detect", {{"m", 4}, {"theta0", 45}}, 175.0 / 256.0, e, 0.01);
}

TEST(ReportTest, CsvRoundTripIsExact) {
    const std::vector<ComparisonRow> rows{sample_row(), sample_row()};
    const Json cfg{{"seed", 7}, {"trials", 100000}};
    const auto text = format_report(rows, ReportFormat::Csv, cfg);
    EXPECT_EQ(text.rfind("# effective-config: ", 0), 0u);
    const auto parsed = parse_report(text, ReportFormat::Csv);
    EXPECT_EQ(parsed.rows, rows);
    EXPECT_EQ(*parsed.effective_config, cfg);
}

TEST(ReportTest, JsonRoundTripIsExact) {
    const std::vector<ComparisonRow> rows{sample_row()};
    const auto parsed = parse_report(format_report(rows, ReportFormat::Json), ReportFormat::Json);
    EXPECT_EQ(parsed.rows, rows);
    EXPECT_FALSE(parsed.effective_config.has_value());
}

TEST(ReportTest, HeaderColumns) {
    const auto text = format_report({}, ReportFormat::Csv);
    EXPECT_EQ(text, std::string(kReportHeader) + "\n");
}

TEST(ReportTest, MalformedReportsRejected) {
    EXPECT_THROW(parse_report("nope\n", ReportFormat::Csv), std::invalid_argument);
    EXPECT_THROW(parse_report(std::string(kReportHeader) + "\na,b\n", ReportFormat::Csv), std::invalid_argument);
    EXPECT_THROW(report_format_from_string("xml"), std::invalid_argument);
}

TEST(ReportTest, UnwritablePathThrows) {
    EXPECT_THROW(write_text_file("/nonexistent-dir/x.csv", "x"), std::runtime_error);
    EXPECT_THROW(read_text_file("/nonexistent-dir/x.csv"), std::runtime_error);
}

}  // namespace
}  // namespace qsdc
