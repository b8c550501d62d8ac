#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bac/error.hpp"

namespace bac {

enum class Artifact { TaskModel, Prototype, FinalGui };
enum class Status { Passed, Failed, Pending, NotPerformed, Skipped, Unrecognized };

enum class InconsistencyKind {
    // task models
    DifferentTaskName,
    TaskNotExtracted,
    WrongPosition,
    UnpairedBehavior,
    EquivalentBehaviorMissing,
    SpecModelConflict,
    // prototypes
    ExpectedActualConflict,
    LabelElementGroupSplit,
    InexistentElement,
    SemanticallyIncompatibleElement,
    AmbiguousElement,
    UntraceableInteraction,
    // final GUIs
    MessageNotIdentified,
    ElementOrValueNotFound,
    InexistentGuiElement,  // serialized as "InexistentElement"
    ValueDoesNotFit,
    FieldAlreadyFilled,
    ElementNotIdentified,
};

std::string_view artifact_name(Artifact a);
std::string_view status_name(Status s);
std::string_view kind_name(InconsistencyKind k);
std::string_view kind_description(InconsistencyKind k);
Artifact kind_artifact(InconsistencyKind k);

std::optional<Artifact> parse_artifact(std::string_view s);
std::optional<Status> parse_status(std::string_view s);
std::optional<InconsistencyKind> parse_kind(std::string_view s, Artifact column);

std::vector<InconsistencyKind> all_kinds();

/// What an assessor observed when a step failed. classify() turns it into a
/// category; the assessors never pick categories themselves.
enum class FailureSignal {
    TaskNotFound,
    TaskWrongPosition,
    ElementCount,
    StateTransition,
    GuiUnmappedName,
    GuiLocatorNone,
    GuiLocatorMany,
    GuiKindMismatch,
    GuiValueTooLong,
    GuiFieldFilled,
    GuiUnknownScreen,
    GuiScreenMismatch,
    GuiMessageNotDisplayed,
    GuiValueNotFound,
    GuiStateMismatch,
    Other,
};

struct FailureEvidence {
    Artifact artifact = Artifact::Prototype;
    FailureSignal signal = FailureSignal::Other;
    std::string subject;                  // searched task, field name or message
    std::vector<std::string> candidates;  // names present in the artifact

    // task models
    bool in_reference_model = false;
    bool object_with_known_verb = false;
    bool object_with_unknown_verb = false;

    // prototypes
    int count = 0;
    bool label_in_other_group = false;
    bool type_rejected = false;
};

InconsistencyKind classify(const FailureEvidence& evidence);

struct StepResult {
    std::string story_title;
    std::string scenario_title;
    std::string step_text;  // keyword included
    int line = 0;
    Artifact artifact = Artifact::TaskModel;
    std::string artifact_path;
    Status status = Status::Passed;
    std::string evidence;
    std::string expected;
    std::string actual;
    std::string snapshot;  // failures only: DOM or control dump
    std::optional<InconsistencyKind> classification;

    bool operator==(const StepResult&) const = default;
};

/// Sets status Failed and the classification derived from the evidence.
void mark_failed(StepResult& r, const FailureEvidence& evidence);

/// Process-level findings that are not tied to one step.
struct Diagnostic {
    Artifact artifact = Artifact::TaskModel;
    std::string story_title;
    std::string scenario_title;
    std::string kind;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

struct ArtifactSummary {
    int total = 0;
    int analyzed = 0;
    int consistent = 0;
    int inconsistent = 0;
    int pending = 0;
    int not_performed = 0;
    int skipped = 0;
    int unrecognized = 0;

    bool operator==(const ArtifactSummary&) const = default;
};

std::map<Artifact, ArtifactSummary> summarize(const std::vector<StepResult>& results);

struct Report {
    std::vector<StepResult> results;
    std::vector<Diagnostic> diagnostics;
    std::map<Artifact, ArtifactSummary> summary;
};

/// One line per result: status marker, artifact, scenario, step, evidence.
std::string emit_console_log(const std::vector<StepResult>& results, bool color);

std::string emit_json_report(const std::vector<StepResult>& results, const std::vector<Diagnostic>& diagnostics = {});
void write_json_report(const std::string& path, const std::vector<StepResult>& results,
                       const std::vector<Diagnostic>& diagnostics = {});
Report parse_json_report(std::string_view json_text);

/// Exit-code rule: true iff some result is Failed or Unrecognized.
bool has_inconsistencies(const std::vector<StepResult>& results);

}  // namespace bac
