#pragma once

// Fixture-level checks shared by the gtest suite and the acceptance runner.
// Each returns a list of mismatches; empty means the fixture behaves.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bac/cli.hpp"
#include "bac/guicheck.hpp"
#include "bac/protocheck.hpp"
#include "bac/report.hpp"
#include "bac/taskcheck.hpp"
#include "support.hpp"

namespace bactest {

struct CaseStudyRow {
    std::string field;  // substring identifying the step
    std::string task_expected, task_actual;
    std::string proto_actual;
    std::optional<bac::InconsistencyKind> gui;  // nullopt: passes
};

// First scenario of the case study, Expected/Actual cells per artifact.
inline const std::vector<CaseStudyRow>& case_study_rows() {
    using K = bac::InconsistencyKind;
    static const std::vector<CaseStudyRow> rows = {
        {"I go to", "1", "1", "0", std::nullopt},
        {"\"Departure\"", "2/3", "0", "1", std::nullopt},
        {"\"Destination\"", "4/5", "0", "1", std::nullopt},
        {"\"Departure Date\"", "6", "8", "0", std::nullopt},
        {"\"Departure Time Frame\"", "7", "9", "1", K::ElementNotIdentified},
        {"\"Round Trip\"", "8", "0", "1", std::nullopt},
        {"\"Arrival Date\"", "9", "10", "0", std::nullopt},
        {"\"Arrival Time Frame\"", "10", "11", "1", K::ElementNotIdentified},
        {"\"Number of Passengers\"", "11", "12", "0", K::ElementOrValueNotFound},
        {"\"Timeframe\"", "12", "0", "0", K::ElementNotIdentified},
        {"\"Direct Flights Only\"", "13", "14", "0", std::nullopt},
        {"\"Flight Class\"", "14", "0", "0", K::ElementNotIdentified},
        {"\"Air France\"", "15", "0", "3", K::ValueDoesNotFit},
        {"\"Search\"", "16", "17", "1", std::nullopt},
        {"will be displayed", "17", "0", "0", std::nullopt},
    };
    return rows;
}

struct CaseStudyResults {
    std::vector<bac::StepResult> task, proto, gui;
};

inline CaseStudyResults run_case_study(bac::Mode gui_mode = bac::Mode::Continue) {
    CaseStudyResults out;
    auto story = bac::load_story(fixture("case_study/flight_search.story"));
    auto model = bac::load_task_model(fixture("case_study/book_flights.hmst"));
    auto scen = bac::load_task_scenario(fixture("case_study/full_options.scen"), {model});
    bac::TaskCheckOptions topt;
    for (const auto& [id, t] : model.tasks) topt.reference_task_names.push_back(t.name);
    out.task = bac::assess_task_scenarios(story, {scen}, catalog(), topt).results;

    auto proto = bac::parse_prototype(fixture("case_study/flight_search.bmml"));
    out.proto = bac::assess_prototype(story, proto, catalog(), mapping(), bac::Mode::Continue);

    auto gui_story = bac::load_story(fixture("case_study/flight_search_gui.story"));
    auto map = bac::load_page_map(fixture("case_study/page_map.json"));
    bac::StaticDomRunner runner(map);
    bac::GuiCheckOptions gopt;
    gopt.mode = gui_mode;
    out.gui = bac::assess_final_gui(gui_story, map, catalog(), runner, gopt);
    return out;
}

inline std::vector<std::string> check_case_study_rows(const CaseStudyResults& r) {
    std::vector<std::string> bad;
    const auto& rows = case_study_rows();
    if (r.task.size() != rows.size() || r.proto.size() != rows.size() || r.gui.size() != rows.size()) {
        bad.push_back("step count differs from the table");
        return bad;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        auto where = "step " + std::to_string(i + 1) + " " + row.field + ": ";
        if (r.task[i].step_text.find(row.field) == std::string::npos) bad.push_back(where + "task step mismatch");
        if (r.task[i].expected != row.task_expected || r.task[i].actual != row.task_actual)
            bad.push_back(where + "task " + r.task[i].expected + "/" + r.task[i].actual);
        if (r.proto[i].actual != row.proto_actual) bad.push_back(where + "proto actual " + r.proto[i].actual);
        bool gui_ok = row.gui ? r.gui[i].status == bac::Status::Failed && r.gui[i].classification == row.gui
                              : r.gui[i].status == bac::Status::Passed;
        if (!gui_ok) bad.push_back(where + "gui " + std::string(bac::status_name(r.gui[i].status)) + " " + r.gui[i].evidence);
    }
    return bad;
}

// The headline cells of the case study.
inline std::vector<std::string> check_case_study_pattern(const CaseStudyResults& r) {
    std::vector<std::string> bad;
    if (r.task.size() < 13 || r.proto.size() < 13 || r.gui.size() < 13) return {"missing results"};
    if (!(r.task[0].status == bac::Status::Passed && r.task[0].expected == "1" && r.task[0].actual == "1"))
        bad.push_back("goTo task cell");
    if (r.proto[0].actual != "0" || r.proto[0].status != bac::Status::Failed) bad.push_back("goTo prototype count");
    if (!(r.gui[0].status == bac::Status::Passed && r.gui[0].actual == "Flight Search")) bad.push_back("goTo final GUI");
    if (r.task[1].expected != "2/3" || r.task[1].actual != "0") bad.push_back("Departure expansion");
    if (!(r.proto[5].actual == "1" && r.proto[5].status == bac::Status::Passed)) bad.push_back("Round Trip count");
    if (!(r.gui[12].status == bac::Status::Failed && r.gui[12].classification == bac::InconsistencyKind::ValueDoesNotFit))
        bad.push_back("Air France fit");
    return bad;
}

struct TaxonomyOutcome {
    std::string fixture;
    std::string intended;
    std::vector<std::string> got;  // classifications of failed steps
};

inline std::vector<TaxonomyOutcome> run_taxonomy() {
    namespace fs = std::filesystem;
    std::vector<TaxonomyOutcome> out;
    auto add = [&](const std::string& path, bac::Artifact artifact, const std::vector<bac::StepResult>& rs) {
        TaxonomyOutcome o{path, fs::path(path).stem().string(), {}};
        for (const auto& r : rs) {
            if (r.status == bac::Status::Failed) o.got.push_back(r.classification ? std::string(bac::kind_name(*r.classification)) : "?");
            else if (r.status != bac::Status::Passed) o.got.push_back(std::string(bac::status_name(r.status)));
            if (r.classification && bac::kind_artifact(*r.classification) != artifact) o.got.push_back("wrong column");
        }
        out.push_back(std::move(o));
    };

    auto model = bac::load_task_model(fixture("taxonomy/task/model.hmst"));
    auto scen = bac::load_task_scenario(fixture("taxonomy/task/account.scen"), {model});
    bac::TaskCheckOptions topt;
    for (const auto& [id, t] : model.tasks) topt.reference_task_names.push_back(t.name);
    for (const auto& p : bac::expand_paths({fixture("taxonomy/task")}, ".story")) {
        add(p, bac::Artifact::TaskModel, bac::assess_task_scenarios(bac::load_story(p), {scen}, catalog(), topt).results);
    }

    auto proto = bac::parse_prototype(fixture("taxonomy/proto/account.bmml"));
    for (const auto& p : bac::expand_paths({fixture("taxonomy/proto")}, ".story")) {
        add(p, bac::Artifact::Prototype, bac::assess_prototype(bac::load_story(p), proto, catalog(), mapping()));
    }

    auto map = bac::load_page_map(fixture("taxonomy/gui/page_map.json"));
    for (const auto& p : bac::expand_paths({fixture("taxonomy/gui")}, ".story")) {
        bac::StaticDomRunner runner(map);
        add(p, bac::Artifact::FinalGui, bac::assess_final_gui(bac::load_story(p), map, catalog(), runner));
    }
    return out;
}

inline bool taxonomy_ok(const TaxonomyOutcome& o) { return o.got == std::vector<std::string>{o.intended}; }

inline std::vector<bac::LintFinding> run_lint_fixture() {
    return bac::lint({fixture("lint/return_tickets.story")}, catalog());
}

}  // namespace bactest
