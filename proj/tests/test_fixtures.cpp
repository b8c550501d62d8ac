#include <gtest/gtest.h>

#include "fixture_checks.hpp"

using namespace bactest;

TEST(CaseStudy, EveryCellMatches) {
    auto r = run_case_study();
    for (const auto& m : check_case_study_rows(r)) ADD_FAILURE() << m;
}

TEST(CaseStudy, HighlightedPattern) {
    auto r = run_case_study();
    for (const auto& m : check_case_study_pattern(r)) ADD_FAILURE() << m;
}

TEST(CaseStudy, DepartureIsSpecModelConflict) {
    auto r = run_case_study();
    ASSERT_GE(r.task.size(), 2u);
    EXPECT_EQ(r.task[1].classification, bac::InconsistencyKind::SpecModelConflict);
    EXPECT_EQ(r.proto[12].classification, bac::InconsistencyKind::AmbiguousElement);
    EXPECT_EQ(r.proto.back().classification, bac::InconsistencyKind::UntraceableInteraction);
}

TEST(CaseStudy, FailFastStopsAtFirstGuiFailure) {
    auto r = run_case_study(bac::Mode::FailFast);
    ASSERT_EQ(r.gui.size(), case_study_rows().size());
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(r.gui[i].status, bac::Status::Passed) << i;
    EXPECT_EQ(r.gui[4].status, bac::Status::Failed);
    for (std::size_t i = 5; i < r.gui.size(); ++i) EXPECT_EQ(r.gui[i].status, bac::Status::NotPerformed) << i;
}

TEST(Taxonomy, EachFixtureYieldsItsCategory) {
    auto outcomes = run_taxonomy();
    EXPECT_EQ(outcomes.size(), 18u);
    std::map<std::string, int> per_dir;
    for (const auto& o : outcomes) {
        per_dir[std::filesystem::path(o.fixture).parent_path().filename().string()]++;
        std::string got;
        for (const auto& g : o.got) got += g + " ";
        EXPECT_TRUE(taxonomy_ok(o)) << o.fixture << " gave: " << got;
    }
    EXPECT_GE(per_dir["task"], 6);
    EXPECT_GE(per_dir["proto"], 6);
    EXPECT_GE(per_dir["gui"], 6);
}

TEST(Lint, FlagsOnlyTheUnmatchedDateLine) {
    auto findings = run_lint_fixture();
    EXPECT_EQ(findings.size(), 9u);
    std::vector<int> flagged;
    for (const auto& f : findings)
        if (!f.recognized) flagged.push_back(f.line);
    EXPECT_EQ(flagged, std::vector<int>{13});
    for (const auto& f : findings)
        if (!f.recognized) EXPECT_NE(f.step.find("I set the date"), std::string::npos);
}
