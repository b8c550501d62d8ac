#include "bac/report.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bac/text.hpp"

namespace bac {

namespace {

using json = nlohmann::ordered_json;

struct KindInfo {
    InconsistencyKind kind;
    std::string_view name;
    Artifact column;
    std::string_view description;
};

constexpr std::array<KindInfo, 18> kKinds{{
    {InconsistencyKind::DifferentTaskName, "DifferentTaskName", Artifact::TaskModel, "Task with different names"},
    {InconsistencyKind::TaskNotExtracted, "TaskNotExtracted", Artifact::TaskModel, "Task not extracted to the scenario"},
    {InconsistencyKind::WrongPosition, "WrongPosition", Artifact::TaskModel, "Wrong position"},
    {InconsistencyKind::UnpairedBehavior, "UnpairedBehavior", Artifact::TaskModel, "Unpaired behaviors"},
    {InconsistencyKind::EquivalentBehaviorMissing, "EquivalentBehaviorMissing", Artifact::TaskModel,
     "Equivalent behaviors missing"},
    {InconsistencyKind::SpecModelConflict, "SpecModelConflict", Artifact::TaskModel,
     "Conflict between specification and modeling"},
    {InconsistencyKind::ExpectedActualConflict, "ExpectedActualConflict", Artifact::Prototype,
     "Conflict between expected and actual elements"},
    {InconsistencyKind::LabelElementGroupSplit, "LabelElementGroupSplit", Artifact::Prototype,
     "Element and label in different groups"},
    {InconsistencyKind::InexistentElement, "InexistentElement", Artifact::Prototype, "Inexistent elements"},
    {InconsistencyKind::SemanticallyIncompatibleElement, "SemanticallyIncompatibleElement", Artifact::Prototype,
     "Element semantically inconsistent"},
    {InconsistencyKind::AmbiguousElement, "AmbiguousElement", Artifact::Prototype,
     "More than one element to represent the same field"},
    {InconsistencyKind::UntraceableInteraction, "UntraceableInteraction", Artifact::Prototype,
     "Untraceable interaction between screens"},
    {InconsistencyKind::MessageNotIdentified, "MessageNotIdentified", Artifact::FinalGui, "Message not identified"},
    {InconsistencyKind::ElementOrValueNotFound, "ElementOrValueNotFound", Artifact::FinalGui,
     "Element or value not found"},
    {InconsistencyKind::InexistentGuiElement, "InexistentElement", Artifact::FinalGui, "Inexistent elements"},
    {InconsistencyKind::ValueDoesNotFit, "ValueDoesNotFit", Artifact::FinalGui, "Values that do not fit the field"},
    {InconsistencyKind::FieldAlreadyFilled, "FieldAlreadyFilled", Artifact::FinalGui, "Fields already filled in"},
    {InconsistencyKind::ElementNotIdentified, "ElementNotIdentified", Artifact::FinalGui, "Element not identified"},
}};

const KindInfo& info(InconsistencyKind k) {
    for (const auto& i : kKinds) {
        if (i.kind == k) return i;
    }
    throw std::logic_error("unknown inconsistency kind");
}

constexpr std::array<std::string_view, 3> kArtifactNames{"TaskModel", "Prototype", "FinalGui"};
constexpr std::array<std::string_view, 6> kStatusNames{"Passed", "Failed", "Pending", "NotPerformed", "Skipped",
                                                       "Unrecognized"};

bool has_near_name(const FailureEvidence& e) {
    for (const auto& c : e.candidates) {
        if (text::is_near_name(e.subject, c)) return true;
    }
    return false;
}

InconsistencyKind classify_task(const FailureEvidence& e) {
    switch (e.signal) {
        case FailureSignal::TaskWrongPosition:
            return InconsistencyKind::WrongPosition;
        case FailureSignal::TaskNotFound:
            if (has_near_name(e)) return InconsistencyKind::DifferentTaskName;
            if (e.in_reference_model) return InconsistencyKind::TaskNotExtracted;
            if (e.object_with_known_verb) return InconsistencyKind::SpecModelConflict;
            if (e.object_with_unknown_verb) return InconsistencyKind::UnpairedBehavior;
            return InconsistencyKind::EquivalentBehaviorMissing;
        default:
            return InconsistencyKind::SpecModelConflict;
    }
}

InconsistencyKind classify_prototype(const FailureEvidence& e) {
    switch (e.signal) {
        case FailureSignal::StateTransition:
            return InconsistencyKind::UntraceableInteraction;
        case FailureSignal::ElementCount:
            if (e.count >= 2) return InconsistencyKind::AmbiguousElement;
            if (e.count == 1) break;
            if (e.label_in_other_group) return InconsistencyKind::LabelElementGroupSplit;
            if (e.type_rejected) return InconsistencyKind::SemanticallyIncompatibleElement;
            if (has_near_name(e)) return InconsistencyKind::ExpectedActualConflict;
            return InconsistencyKind::InexistentElement;
        default:
            break;
    }
    return InconsistencyKind::ExpectedActualConflict;
}

InconsistencyKind classify_gui(const FailureEvidence& e) {
    switch (e.signal) {
        case FailureSignal::GuiMessageNotDisplayed:
            return InconsistencyKind::MessageNotIdentified;
        case FailureSignal::GuiUnmappedName:
        case FailureSignal::GuiValueNotFound:
        case FailureSignal::GuiStateMismatch:
            return InconsistencyKind::ElementOrValueNotFound;
        case FailureSignal::GuiLocatorNone:
        case FailureSignal::GuiKindMismatch:
        case FailureSignal::GuiUnknownScreen:
        case FailureSignal::GuiScreenMismatch:
            return InconsistencyKind::InexistentGuiElement;
        case FailureSignal::GuiLocatorMany:
            return InconsistencyKind::ElementNotIdentified;
        case FailureSignal::GuiValueTooLong:
            return InconsistencyKind::ValueDoesNotFit;
        case FailureSignal::GuiFieldFilled:
            return InconsistencyKind::FieldAlreadyFilled;
        default:
            return InconsistencyKind::ElementOrValueNotFound;
    }
}

std::string marker(Status s, bool color) {
    struct M {
        const char* label;
        const char* ansi;
    };
    static const std::array<M, 6> kMarkers{{
        {"PASSED", "\x1b[32m"},
        {"FAILED", "\x1b[31m"},
        {"PENDING", "\x1b[33m"},
        {"NOT PERFORMED", "\x1b[90m"},
        {"SKIPPED", "\x1b[36m"},
        {"UNRECOGNIZED", "\x1b[35m"},
    }};
    const auto& m = kMarkers[static_cast<std::size_t>(s)];
    std::string label = std::string("[") + m.label + "]";
    return color ? std::string(m.ansi) + label + "\x1b[0m" : label;
}

json result_to_json(const StepResult& r) {
    json j;
    j["artifact"] = artifact_name(r.artifact);
    j["artifactPath"] = r.artifact_path;
    j["line"] = r.line;
    j["step"] = r.step_text;
    j["status"] = status_name(r.status);
    j["classification"] = r.classification ? json(kind_name(*r.classification)) : json(nullptr);
    j["evidence"] = r.evidence;
    j["expected"] = r.expected;
    j["actual"] = r.actual;
    if (!r.snapshot.empty()) j["snapshot"] = r.snapshot;
    return j;
}

template <typename T, std::size_t N>
std::optional<T> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == s) return static_cast<T>(i);
    }
    return std::nullopt;
}

}  // namespace

std::string_view artifact_name(Artifact a) { return kArtifactNames[static_cast<std::size_t>(a)]; }
std::string_view status_name(Status s) { return kStatusNames[static_cast<std::size_t>(s)]; }
std::string_view kind_name(InconsistencyKind k) { return info(k).name; }
std::string_view kind_description(InconsistencyKind k) { return info(k).description; }
Artifact kind_artifact(InconsistencyKind k) { return info(k).column; }

std::optional<Artifact> parse_artifact(std::string_view s) { return lookup<Artifact>(kArtifactNames, s); }
std::optional<Status> parse_status(std::string_view s) { return lookup<Status>(kStatusNames, s); }

std::optional<InconsistencyKind> parse_kind(std::string_view s, Artifact column) {
    for (const auto& i : kKinds) {
        if (i.name == s && i.column == column) return i.kind;
    }
    return std::nullopt;
}

std::vector<InconsistencyKind> all_kinds() {
    std::vector<InconsistencyKind> out;
    for (const auto& i : kKinds) out.push_back(i.kind);
    return out;
}

InconsistencyKind classify(const FailureEvidence& evidence) {
    switch (evidence.artifact) {
        case Artifact::TaskModel:
            return classify_task(evidence);
        case Artifact::Prototype:
            return classify_prototype(evidence);
        case Artifact::FinalGui:
            return classify_gui(evidence);
    }
    return InconsistencyKind::ExpectedActualConflict;
}

void mark_failed(StepResult& r, const FailureEvidence& evidence) {
    r.status = Status::Failed;
    r.classification = classify(evidence);
}

std::map<Artifact, ArtifactSummary> summarize(const std::vector<StepResult>& results) {
    std::map<Artifact, ArtifactSummary> out;
    for (const auto& r : results) {
        auto& s = out[r.artifact];
        ++s.total;
        ++s.analyzed;
        switch (r.status) {
            case Status::Passed: ++s.consistent; break;
            case Status::Failed: ++s.inconsistent; break;
            case Status::Pending: ++s.pending; break;
            case Status::NotPerformed: ++s.not_performed; break;
            case Status::Skipped: ++s.skipped; break;
            case Status::Unrecognized: ++s.unrecognized; break;
        }
    }
    return out;
}

bool has_inconsistencies(const std::vector<StepResult>& results) {
    for (const auto& r : results) {
        if (r.status == Status::Failed || r.status == Status::Unrecognized) return true;
    }
    return false;
}

std::string emit_console_log(const std::vector<StepResult>& results, bool color) {
    std::ostringstream out;
    for (const auto& r : results) {
        out << marker(r.status, color) << " " << artifact_name(r.artifact) << " | " << r.scenario_title << " | "
            << r.step_text;
        if (r.line > 0) out << " (line " << r.line << ")";
        if (!r.expected.empty() || !r.actual.empty()) {
            out << " | Expected: " << (r.expected.empty() ? "-" : r.expected)
                << " Actual: " << (r.actual.empty() ? "-" : r.actual);
        }
        if (!r.evidence.empty()) out << " | " << r.evidence;
        if (r.classification) out << " | " << kind_description(*r.classification);
        out << "\n";
    }
    return out.str();
}

std::string emit_json_report(const std::vector<StepResult>& results, const std::vector<Diagnostic>& diagnostics) {
    json root;
    json summary = json::object();
    auto sums = summarize(results);
    for (auto a : {Artifact::TaskModel, Artifact::Prototype, Artifact::FinalGui}) {
        auto it = sums.find(a);
        ArtifactSummary s = it == sums.end() ? ArtifactSummary{} : it->second;
        summary[std::string(artifact_name(a))] = {
            {"total", s.total},           {"analyzed", s.analyzed},       {"consistent", s.consistent},
            {"inconsistent", s.inconsistent}, {"pending", s.pending},     {"notPerformed", s.not_performed},
            {"skipped", s.skipped},       {"unrecognized", s.unrecognized},
        };
    }
    root["summary"] = summary;

    json stories = json::array();
    for (const auto& r : results) {
        json* story = nullptr;
        for (auto& s : stories) {
            if (s["title"] == r.story_title) story = &s;
        }
        if (!story) {
            stories.push_back({{"title", r.story_title}, {"scenarios", json::array()}});
            story = &stories.back();
        }
        auto& scenarios = (*story)["scenarios"];
        json* scenario = nullptr;
        for (auto& s : scenarios) {
            if (s["title"] == r.scenario_title) scenario = &s;
        }
        if (!scenario) {
            scenarios.push_back({{"title", r.scenario_title}, {"steps", json::array()}});
            scenario = &scenarios.back();
        }
        (*scenario)["steps"].push_back(result_to_json(r));
    }
    root["stories"] = stories;

    json diags = json::array();
    for (const auto& d : diagnostics) {
        diags.push_back({{"artifact", artifact_name(d.artifact)},
                         {"story", d.story_title},
                         {"scenario", d.scenario_title},
                         {"kind", d.kind},
                         {"message", d.message}});
    }
    root["diagnostics"] = diags;
    return root.dump(2) + "\n";
}

void write_json_report(const std::string& path, const std::vector<StepResult>& results,
                       const std::vector<Diagnostic>& diagnostics) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report " + path);
    out << emit_json_report(results, diagnostics);
    if (!out) throw IoError("cannot write report " + path);
}

Report parse_json_report(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
    auto need = [](const json& j, const char* key) -> const json& {
        if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("report: missing '") + key + "'");
        return j.at(key);
    };
    Report report;
    try {
        for (const auto& story : need(root, "stories")) {
            for (const auto& scenario : need(story, "scenarios")) {
                for (const auto& step : need(scenario, "steps")) {
                    StepResult r;
                    r.story_title = need(story, "title").get<std::string>();
                    r.scenario_title = need(scenario, "title").get<std::string>();
                    auto artifact = parse_artifact(need(step, "artifact").get<std::string>());
                    auto status = parse_status(need(step, "status").get<std::string>());
                    if (!artifact || !status) throw ParseError("report: bad artifact or status");
                    r.artifact = *artifact;
                    r.status = *status;
                    r.artifact_path = need(step, "artifactPath").get<std::string>();
                    r.line = need(step, "line").get<int>();
                    r.step_text = need(step, "step").get<std::string>();
                    r.evidence = need(step, "evidence").get<std::string>();
                    r.expected = need(step, "expected").get<std::string>();
                    r.actual = need(step, "actual").get<std::string>();
                    r.snapshot = step.value("snapshot", "");
                    const auto& c = need(step, "classification");
                    if (!c.is_null()) {
                        r.classification = parse_kind(c.get<std::string>(), r.artifact);
                        if (!r.classification) throw ParseError("report: bad classification " + c.dump());
                    }
                    report.results.push_back(std::move(r));
                }
            }
        }
        if (root.contains("diagnostics")) {
            for (const auto& d : root.at("diagnostics")) {
                auto artifact = parse_artifact(need(d, "artifact").get<std::string>());
                if (!artifact) throw ParseError("report: bad diagnostic artifact");
                report.diagnostics.push_back(Diagnostic{*artifact, need(d, "story").get<std::string>(),
                                                        need(d, "scenario").get<std::string>(),
                                                        need(d, "kind").get<std::string>(),
                                                        need(d, "message").get<std::string>()});
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
    report.summary = summarize(report.results);
    return report;
}

}  // namespace bac
