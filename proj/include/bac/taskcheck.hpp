#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bac/error.hpp"
#include "bac/ontology.hpp"
#include "bac/report.hpp"
#include "bac/story.hpp"

namespace bac {

class UnresolvedReference : public Error {
public:
    explicit UnresolvedReference(std::string task_id, const std::string& where = {});
    const std::string& task_id() const { return task_id_; }

private:
    std::string task_id_;
};

struct TaskDef {
    std::string name;
    bool optional = false;
    std::string task_type;
};

/// Reference task model (`.hmst` subset): `<task id name type [optional]>`
/// elements at any depth plus `<object id name>` elements.
struct TaskModelRef {
    std::map<std::string, TaskDef> tasks;
    std::map<std::string, std::string> objects;
    std::string source_path;
};

struct RawEntry {
    std::string task_id;
    std::optional<std::string> object_id;
    std::optional<std::string> object_value;
};

/// Extracted scenario (`.scen` subset): `<scenario name>` with
/// `<taskref id [objectid] [value]/>` children.
struct RawScenario {
    std::string name;
    std::vector<RawEntry> entries;
    std::string source_path;
};

struct EnrichedTask {
    std::string name;
    bool optional = false;
    std::optional<std::string> value;

    bool operator==(const EnrichedTask&) const = default;
};

struct EnrichedTaskScenario {
    std::string name;
    std::vector<EnrichedTask> tasks;  // positions are 1-based indices
    std::string source_path;

    bool operator==(const EnrichedTaskScenario&) const = default;
};

TaskModelRef parse_task_model(std::string_view xml, const std::string& origin);
TaskModelRef load_task_model(const std::string& path);

RawScenario parse_raw_scenario(std::string_view xml, const std::string& origin);

EnrichedTaskScenario preformat(const RawScenario& raw, const TaskModelRef& model);

/// `<scenario name><task name optional [value]/>...</scenario>`
std::string to_enriched_xml(const EnrichedTaskScenario& scenario);
EnrichedTaskScenario parse_enriched_scenario(std::string_view xml, const std::string& origin);

/// Loads a `.scen` file: an already enriched file is read as is, a raw one is
/// preformatted against the first model that defines all its task ids.
EnrichedTaskScenario load_task_scenario(const std::string& path, const std::vector<TaskModelRef>& models);

/// One row per (search string, task scenario).
struct TaskMatchRow {
    std::string bdd_scenario;
    std::string step_text;
    int line = 0;
    std::string searched_task;
    int expected_position = 0;
    std::string task_scenario;
    std::vector<int> found_positions;
    std::vector<std::optional<std::string>> values;  // nullopt prints as "No Value"
    std::vector<bool> optional_flags;
    bool not_found = true;
};

struct TaskCheckOptions {
    std::vector<std::string> skip_task_names;
    std::vector<std::string> reference_task_names;  // every task name in the models
    std::string artifact_path;
};

struct TaskAssessment {
    std::vector<TaskMatchRow> log;
    std::vector<StepResult> results;
    std::vector<Diagnostic> diagnostics;
};

/// Every step is checked against every scenario (no fail-fast). A step is
/// Passed iff each of its search strings sits at its expected position in
/// at least one scenario; the expected position is one past the number of
/// tasks the preceding matched steps of the same BDD scenario expand to.
TaskAssessment assess_task_scenarios(const Story& story, const std::vector<EnrichedTaskScenario>& scenarios,
                                     const OntologyCatalog& catalog, const TaskCheckOptions& options = {});

/// Console log in the "scenario | task | position | value" layout.
std::string emit_console_log(const std::vector<TaskMatchRow>& log);

}  // namespace bac
