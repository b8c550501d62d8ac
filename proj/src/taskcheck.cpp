#include "bac/taskcheck.hpp"

#include <algorithm>
#include <sstream>

#include "bac/markup.hpp"
#include "bac/text.hpp"

namespace bac {

namespace {

std::optional<std::string> attr_of(const markup::Document& doc, markup::NodeId id, std::string_view name) {
    if (const auto* v = doc.node(id).attr(name)) return *v;
    return std::nullopt;
}

std::string required_attr(const markup::Document& doc, markup::NodeId id, std::string_view name,
                          const std::string& origin) {
    auto v = attr_of(doc, id, name);
    if (!v || text::trim(*v).empty()) {
        throw ParseError(origin + ":" + std::to_string(doc.node(id).line) + ": <" + doc.node(id).name +
                         "> needs a '" + std::string(name) + "' attribute at " + doc.path(id));
    }
    return text::trim(*v);
}

bool truthy(const std::optional<std::string>& v) {
    if (!v) return false;
    auto f = text::fold_case(text::trim(*v));
    return f == "true" || f == "1" || f == "yes";
}

markup::NodeId scenario_root(const markup::Document& doc, const std::string& origin) {
    auto root = doc.document_element();
    if (!root) throw ParseError(origin + ": no root element");
    if (doc.node(*root).name == "scenario") return *root;
    auto found = doc.elements_named("scenario");
    if (found.size() != 1) throw ParseError(origin + ": expected exactly one <scenario> element");
    return found.front();
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string join_ints(const std::vector<int>& v, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

// Value of the entry's target placeholder, used to spot scenario tasks that
// talk about the same object under another behavior.
std::optional<std::string> target_value(const StepBinding& b, const OntologyCatalog& catalog) {
    const auto& entry = catalog.at(b.behavior_id);
    std::optional<std::string> target = entry.target;
    if (!target) target = catalog.canonical(b.behavior_id).target;
    if (!target) return std::nullopt;
    const auto* v = b.value(*target);
    if (!v || text::trim(*v).empty()) return std::nullopt;
    return *v;
}

bool mentions(std::string_view task_name, std::string_view object) {
    return text::canonical(task_name).find(text::canonical(object)) != std::string::npos;
}

}  // namespace

UnresolvedReference::UnresolvedReference(std::string task_id, const std::string& where)
    : Error((where.empty() ? std::string() : where + ": ") + "task id '" + task_id + "' is not in the task model"),
      task_id_(std::move(task_id)) {}

TaskModelRef parse_task_model(std::string_view xml, const std::string& origin) {
    auto doc = markup::parse_xml(xml, origin);
    TaskModelRef model;
    model.source_path = origin;
    for (auto id : doc.elements_named("task")) {
        auto tid = required_attr(doc, id, "id", origin);
        TaskDef def;
        def.name = required_attr(doc, id, "name", origin);
        def.task_type = attr_of(doc, id, "type").value_or("");
        def.optional = truthy(attr_of(doc, id, "optional"));
        if (!model.tasks.emplace(tid, def).second) {
            throw ParseError(origin + ":" + std::to_string(doc.node(id).line) + ": duplicate task id '" + tid + "'");
        }
    }
    for (auto id : doc.elements_named("object")) {
        model.objects[required_attr(doc, id, "id", origin)] = attr_of(doc, id, "name").value_or("");
    }
    return model;
}

TaskModelRef load_task_model(const std::string& path) { return parse_task_model(read_file(path), path); }

RawScenario parse_raw_scenario(std::string_view xml, const std::string& origin) {
    auto doc = markup::parse_xml(xml, origin);
    auto root = scenario_root(doc, origin);
    RawScenario raw;
    raw.source_path = origin;
    raw.name = required_attr(doc, root, "name", origin);
    for (auto id : doc.elements_named("taskref", root)) {
        RawEntry e;
        e.task_id = required_attr(doc, id, "id", origin);
        e.object_id = attr_of(doc, id, "objectid");
        e.object_value = attr_of(doc, id, "value");
        raw.entries.push_back(std::move(e));
    }
    return raw;
}

EnrichedTaskScenario preformat(const RawScenario& raw, const TaskModelRef& model) {
    EnrichedTaskScenario out;
    out.name = raw.name;
    out.source_path = raw.source_path;
    for (const auto& e : raw.entries) {
        auto it = model.tasks.find(e.task_id);
        if (it == model.tasks.end()) throw UnresolvedReference(e.task_id, raw.source_path);
        out.tasks.push_back(EnrichedTask{it->second.name, it->second.optional, e.object_value});
    }
    return out;
}

std::string to_enriched_xml(const EnrichedTaskScenario& scenario) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<scenario name=\"" << xml_escape(scenario.name) << "\">\n";
    for (const auto& t : scenario.tasks) {
        out << "  <task name=\"" << xml_escape(t.name) << "\" optional=\"" << (t.optional ? "true" : "false") << "\"";
        if (t.value) out << " value=\"" << xml_escape(*t.value) << "\"";
        out << "/>\n";
    }
    out << "</scenario>\n";
    return out.str();
}

EnrichedTaskScenario parse_enriched_scenario(std::string_view xml, const std::string& origin) {
    auto doc = markup::parse_xml(xml, origin);
    auto root = scenario_root(doc, origin);
    EnrichedTaskScenario out;
    out.source_path = origin;
    out.name = required_attr(doc, root, "name", origin);
    for (auto id : doc.elements_named("task", root)) {
        out.tasks.push_back(EnrichedTask{required_attr(doc, id, "name", origin),
                                         truthy(attr_of(doc, id, "optional")), attr_of(doc, id, "value")});
    }
    return out;
}

EnrichedTaskScenario load_task_scenario(const std::string& path, const std::vector<TaskModelRef>& models) {
    auto source = read_file(path);
    auto doc = markup::parse_xml(source, path);
    if (doc.elements_named("taskref").empty()) return parse_enriched_scenario(source, path);

    auto raw = parse_raw_scenario(source, path);
    for (const auto& m : models) {
        bool all = std::all_of(raw.entries.begin(), raw.entries.end(),
                               [&](const RawEntry& e) { return m.tasks.count(e.task_id) > 0; });
        if (all) return preformat(raw, m);
    }
    for (const auto& e : raw.entries) {
        bool known = std::any_of(models.begin(), models.end(), [&](const TaskModelRef& m) {
            return m.tasks.count(e.task_id) > 0;
        });
        if (!known) throw UnresolvedReference(e.task_id, path);
    }
    throw UnresolvedReference(raw.entries.front().task_id, path + " (ids spread over several models)");
}

TaskAssessment assess_task_scenarios(const Story& story, const std::vector<EnrichedTaskScenario>& input,
                                     const OntologyCatalog& catalog, const TaskCheckOptions& options) {
    std::vector<EnrichedTaskScenario> scenarios = input;
    if (!options.skip_task_names.empty()) {
        for (auto& sc : scenarios) {
            std::erase_if(sc.tasks, [&](const EnrichedTask& t) {
                return std::any_of(options.skip_task_names.begin(), options.skip_task_names.end(),
                                   [&](const std::string& s) { return text::same_name(s, t.name); });
            });
        }
    }

    std::vector<std::string> candidates;
    for (const auto& sc : scenarios) {
        for (const auto& t : sc.tasks) {
            if (std::none_of(candidates.begin(), candidates.end(),
                             [&](const std::string& c) { return text::same_name(c, t.name); }))
                candidates.push_back(t.name);
        }
    }

    TaskAssessment out;
    for (const auto& bdd : story.scenarios) {
        int expanded = 0;
        int matched_steps = 0;
        bool anything_found = false;

        for (const auto& step : bdd.steps) {
            StepResult r;
            r.story_title = story.title;
            r.scenario_title = bdd.title;
            r.step_text = step_line(step);
            r.line = step.line_number;
            r.artifact = Artifact::TaskModel;
            r.artifact_path = options.artifact_path;

            auto binding = match_step(step, catalog);
            if (!binding) {
                r.status = Status::Unrecognized;
                r.evidence = "no step is matching the ontology";
                out.results.push_back(std::move(r));
                continue;
            }
            ++matched_steps;

            auto searches = derive_task_names(*binding, catalog);
            std::vector<std::string> expected_cells, actual_cells, evidence;
            std::optional<std::string> first_missing;
            bool all_consistent = true;

            for (const auto& search : searches) {
                int expected = ++expanded;
                bool consistent = false;
                int first_found = 0;
                for (const auto& sc : scenarios) {
                    TaskMatchRow row;
                    row.bdd_scenario = bdd.title;
                    row.step_text = r.step_text;
                    row.line = step.line_number;
                    row.searched_task = search;
                    row.expected_position = expected;
                    row.task_scenario = sc.name;
                    for (std::size_t i = 0; i < sc.tasks.size(); ++i) {
                        if (!text::same_name(sc.tasks[i].name, search)) continue;
                        int pos = static_cast<int>(i) + 1;
                        row.found_positions.push_back(pos);
                        row.values.push_back(sc.tasks[i].value);
                        row.optional_flags.push_back(sc.tasks[i].optional);
                        if (pos == expected) consistent = true;
                        if (!first_found) first_found = pos;
                    }
                    row.not_found = row.found_positions.empty();
                    if (!row.not_found) {
                        evidence.push_back("\"" + search + "\" at " + join_ints(row.found_positions, ",") + " in \"" +
                                           sc.name + "\"");
                    }
                    out.log.push_back(std::move(row));
                }
                if (first_found) anything_found = true;
                if (!first_found && !first_missing) first_missing = search;
                if (!first_found) evidence.push_back("\"" + search + "\": Task not found!");
                all_consistent = all_consistent && consistent;
                expected_cells.push_back(std::to_string(expected));
                actual_cells.push_back(std::to_string(consistent ? expected : first_found));
            }

            auto join = [](const std::vector<std::string>& v, std::string_view sep) {
                std::string s;
                for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(sep) : "") + v[i];
                return s;
            };
            r.expected = join(expected_cells, "/");
            bool none_found = std::all_of(actual_cells.begin(), actual_cells.end(),
                                          [](const std::string& c) { return c == "0"; });
            r.actual = none_found ? "0" : join(actual_cells, "/");
            r.evidence = join(evidence, "; ");

            if (all_consistent) {
                r.status = Status::Passed;
            } else {
                FailureEvidence ev;
                ev.artifact = Artifact::TaskModel;
                ev.candidates = candidates;
                if (first_missing) {
                    ev.signal = FailureSignal::TaskNotFound;
                    ev.subject = *first_missing;
                    ev.in_reference_model = std::any_of(
                        options.reference_task_names.begin(), options.reference_task_names.end(),
                        [&](const std::string& n) { return text::same_name(n, *first_missing); });
                    if (auto object = target_value(*binding, catalog)) {
                        for (const auto& c : candidates) {
                            if (!mentions(c, *object)) continue;
                            if (is_known_task_name(c, catalog)) ev.object_with_known_verb = true;
                            else ev.object_with_unknown_verb = true;
                        }
                    }
                } else {
                    ev.signal = FailureSignal::TaskWrongPosition;
                    ev.subject = searches.front();
                }
                mark_failed(r, ev);
            }
            out.results.push_back(std::move(r));
        }

        if (matched_steps == 0) continue;
        bool same_length = std::any_of(scenarios.begin(), scenarios.end(), [&](const EnrichedTaskScenario& sc) {
            return static_cast<int>(sc.tasks.size()) == expanded;
        });
        if (!same_length) {
            std::vector<int> lengths;
            for (const auto& sc : scenarios) lengths.push_back(static_cast<int>(sc.tasks.size()));
            out.diagnostics.push_back(Diagnostic{
                Artifact::TaskModel, story.title, bdd.title, "DifferentNumberOfSequences",
                "BDD scenario expands to " + std::to_string(expanded) + " tasks; task scenarios list " +
                    (lengths.empty() ? std::string("none") : join_ints(lengths, ", "))});
        }
        if (!anything_found && !scenarios.empty()) {
            out.diagnostics.push_back(Diagnostic{Artifact::TaskModel, story.title, bdd.title,
                                                 "DifferentSpecificationStrategies",
                                                 "no step of the scenario has a corresponding task in any task "
                                                 "scenario"});
        }
    }
    return out;
}

std::string emit_console_log(const std::vector<TaskMatchRow>& log) {
    std::ostringstream out;
    for (const auto& row : log) {
        out << row.task_scenario << " | " << row.searched_task << " | ";
        if (row.not_found) {
            out << "Task not found!\n";
            continue;
        }
        out << "Position: " << join_ints(row.found_positions, ", ") << " | ";
        for (std::size_t i = 0; i < row.values.size(); ++i) {
            if (i) out << ", ";
            out << (row.values[i] ? *row.values[i] : "No Value");
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace bac
