#include <gtest/gtest.h>

#include <random>

#include "bac/report.hpp"
#include "oracles.hpp"

using namespace bac;

namespace {

StepResult result(Status s, Artifact a = Artifact::FinalGui) {
    StepResult r;
    r.story_title = "Story";
    r.scenario_title = "Scenario";
    r.step_text = "When I click on \"x\"";
    r.line = 3;
    r.artifact = a;
    r.status = s;
    return r;
}

const std::vector<FailureSignal> kSignals = {
    FailureSignal::TaskNotFound,     FailureSignal::TaskWrongPosition, FailureSignal::ElementCount,
    FailureSignal::StateTransition,  FailureSignal::GuiUnmappedName,   FailureSignal::GuiLocatorNone,
    FailureSignal::GuiLocatorMany,   FailureSignal::GuiKindMismatch,   FailureSignal::GuiValueTooLong,
    FailureSignal::GuiFieldFilled,   FailureSignal::GuiUnknownScreen,  FailureSignal::GuiScreenMismatch,
    FailureSignal::GuiMessageNotDisplayed, FailureSignal::GuiValueNotFound, FailureSignal::GuiStateMismatch,
    FailureSignal::Other,
};

FailureEvidence random_evidence(std::mt19937& rng) {
    FailureEvidence e;
    e.artifact = static_cast<Artifact>(bactest::pick(rng, 0, 2));
    e.signal = bactest::pick_from(rng, kSignals);
    e.subject = bactest::pick_from(rng, std::vector<std::string>{"Search", "Click on Search", "Departure Date"});
    if (bactest::pick(rng, 0, 1)) e.candidates = {"Serch", "Click on Serch", "Date"};
    e.in_reference_model = bactest::pick(rng, 0, 1);
    e.object_with_known_verb = bactest::pick(rng, 0, 1);
    e.object_with_unknown_verb = bactest::pick(rng, 0, 1);
    e.count = bactest::pick(rng, 0, 3);
    e.label_in_other_group = bactest::pick(rng, 0, 1);
    e.type_rejected = bactest::pick(rng, 0, 1);
    return e;
}

}  // namespace

TEST(Report, ClassifyExamples) {
    FailureEvidence ambiguous;
    ambiguous.artifact = Artifact::Prototype;
    ambiguous.signal = FailureSignal::ElementCount;
    ambiguous.count = 3;
    EXPECT_EQ(classify(ambiguous), InconsistencyKind::AmbiguousElement);
    EXPECT_EQ(kind_description(InconsistencyKind::AmbiguousElement), "More than one element to represent the same field");

    FailureEvidence overflow;
    overflow.artifact = Artifact::FinalGui;
    overflow.signal = FailureSignal::GuiValueTooLong;
    EXPECT_EQ(classify(overflow), InconsistencyKind::ValueDoesNotFit);
    EXPECT_EQ(kind_description(InconsistencyKind::ValueDoesNotFit), "Values that do not fit the field");

    FailureEvidence moved;
    moved.artifact = Artifact::TaskModel;
    moved.signal = FailureSignal::TaskWrongPosition;
    EXPECT_EQ(classify(moved), InconsistencyKind::WrongPosition);

    FailureEvidence split;
    split.artifact = Artifact::Prototype;
    split.signal = FailureSignal::ElementCount;
    split.label_in_other_group = true;
    EXPECT_EQ(classify(split), InconsistencyKind::LabelElementGroupSplit);

    FailureEvidence drift;
    drift.artifact = Artifact::Prototype;
    drift.signal = FailureSignal::ElementCount;
    drift.subject = "Direct Flights Only";
    drift.candidates = {"Only direct flights"};
    EXPECT_EQ(classify(drift), InconsistencyKind::ExpectedActualConflict);

    FailureEvidence renamed;
    renamed.artifact = Artifact::TaskModel;
    renamed.signal = FailureSignal::TaskNotFound;
    renamed.subject = "Click on Search";
    renamed.candidates = {"Click on Serch"};
    EXPECT_EQ(classify(renamed), InconsistencyKind::DifferentTaskName);
}

TEST(ReportProperty, ClassifyTotalDeterministicAndColumnPreserving) {
    std::mt19937 rng(61);
    for (int i = 0; i < 5000; ++i) {
        auto e = random_evidence(rng);
        auto k = classify(e);
        ASSERT_EQ(classify(e), k);
        ASSERT_EQ(kind_artifact(k), e.artifact);
        ASSERT_FALSE(kind_name(k).empty());
    }
}

TEST(Report, KindNamesParse) {
    EXPECT_EQ(all_kinds().size(), 18u);
    for (auto k : all_kinds()) EXPECT_EQ(parse_kind(kind_name(k), kind_artifact(k)), std::optional(k));
    EXPECT_EQ(kind_name(InconsistencyKind::InexistentGuiElement), "InexistentElement");
}

TEST(Report, SummaryExample) {
    std::vector<StepResult> rs = {result(Status::Passed), result(Status::Failed), result(Status::NotPerformed)};
    auto s = summarize(rs).at(Artifact::FinalGui);
    EXPECT_EQ(s.analyzed, 3);
    EXPECT_EQ(s.consistent, 1);
    EXPECT_EQ(s.inconsistent, 1);
    EXPECT_EQ(s.not_performed, 1);
    auto empty = summarize({});
    for (const auto& [a, sum] : empty) EXPECT_EQ(sum, ArtifactSummary{});
}

TEST(Report, JsonShape) {
    auto json = emit_json_report({});
    EXPECT_NE(json.find("\"total\""), std::string::npos);
    EXPECT_NE(json.find("\"consistent\""), std::string::npos);
    EXPECT_NE(json.find("\"inconsistent\""), std::string::npos);
    EXPECT_NE(json.find("\"TaskModel\""), std::string::npos);
}

TEST(Report, ConsoleLog) {
    auto r = result(Status::Failed);
    r.classification = InconsistencyKind::ValueDoesNotFit;
    auto plain = emit_console_log({r}, false);
    EXPECT_NE(plain.find("[FAILED]"), std::string::npos);
    EXPECT_NE(plain.find("Values that do not fit the field"), std::string::npos);
    EXPECT_EQ(plain.find("\x1b["), std::string::npos);
    EXPECT_NE(emit_console_log({r}, true).find("\x1b["), std::string::npos);
    EXPECT_EQ(emit_console_log({}, false), "");
}

TEST(ReportProperty, ConservationAndRoundTrip) {
    std::mt19937 rng(62);
    for (int i = 0; i < 300; ++i) {
        std::vector<StepResult> rs;
        int n = bactest::pick(rng, 0, 12);
        int scenarios = bactest::pick(rng, 1, 3);
        for (int s = 0; s < scenarios; ++s) {
            for (int k = 0; k < n; ++k) {
                auto r = result(static_cast<Status>(bactest::pick(rng, 0, 5)), static_cast<Artifact>(bactest::pick(rng, 0, 2)));
                r.scenario_title = "S" + std::to_string(s);
                r.line = k + 1;
                r.evidence = bactest::pick(rng, 0, 1) ? "quote \" and \\ and Déc" : "";
                r.expected = std::to_string(k);
                if (r.status == Status::Failed) {
                    auto e = random_evidence(rng);
                    e.artifact = r.artifact;
                    r.classification = classify(e);
                    r.snapshot = "<p>x</p>";
                }
                rs.push_back(r);
            }
        }
        for (const auto& [a, s] : summarize(rs)) {
            ASSERT_EQ(s.analyzed, s.consistent + s.inconsistent + s.pending + s.not_performed + s.skipped + s.unrecognized);
            ASSERT_EQ(s.total, s.analyzed);
        }
        std::vector<Diagnostic> ds = {Diagnostic{Artifact::TaskModel, "Story", "S0", "DifferentNumberOfSequences", "m"}};
        auto report = parse_json_report(emit_json_report(rs, ds));
        ASSERT_EQ(report.results, rs);
        ASSERT_EQ(report.diagnostics, ds);
        ASSERT_EQ(report.summary, summarize(rs));
        ASSERT_EQ(has_inconsistencies(rs), std::any_of(rs.begin(), rs.end(), [](const StepResult& r) {
                      return r.status == Status::Failed || r.status == Status::Unrecognized;
                  }));
    }
}
