#include "bac/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "bac/guicheck.hpp"
#include "bac/report.hpp"
#include "bac/story.hpp"
#include "bac/taskcheck.hpp"
#include "bac/text.hpp"

#ifndef BAC_DEFAULT_DATA_DIR
#define BAC_DEFAULT_DATA_DIR "data"
#endif

namespace bac {

namespace fs = std::filesystem;

namespace {

std::string summary_line(std::string_view command, const std::vector<StepResult>& results) {
    ArtifactSummary s;
    for (const auto& [artifact, sum] : summarize(results)) {
        s.analyzed += sum.analyzed;
        s.consistent += sum.consistent;
        s.inconsistent += sum.inconsistent;
        s.pending += sum.pending;
        s.not_performed += sum.not_performed;
        s.skipped += sum.skipped;
        s.unrecognized += sum.unrecognized;
    }
    std::ostringstream out;
    out << command << ": " << s.analyzed << " steps, " << s.consistent << " passed, " << s.inconsistent
        << " failed, " << s.pending << " pending, " << s.not_performed << " not performed, " << s.skipped
        << " skipped, " << s.unrecognized << " unrecognized\n";
    return out.str();
}

std::string diagnostics_text(const std::vector<Diagnostic>& diags) {
    std::ostringstream out;
    for (const auto& d : diags) {
        out << "[DIAGNOSTIC] " << artifact_name(d.artifact) << " | " << d.scenario_title << " | " << d.kind << ": "
            << d.message << "\n";
    }
    return out.str();
}

struct Loaded {
    OntologyCatalog catalog;
    std::vector<Story> stories;
};

Loaded load_inputs(const RunConfig& c) {
    Loaded l;
    l.catalog = load_catalog(resolve_catalog_path(c.catalog_path));
    auto stories = expand_paths(c.story_paths, ".story");
    if (stories.empty()) throw ConfigError("no story files given (--stories)");
    for (const auto& p : stories) l.stories.push_back(load_story(p));
    return l;
}

std::string enriched_path(const std::string& path) {
    constexpr std::string_view kExt = ".scen";
    if (path.size() > kExt.size() && path.compare(path.size() - kExt.size(), kExt.size(), kExt) == 0)
        return path.substr(0, path.size() - kExt.size()) + ".enriched.scen";
    return path + ".enriched.scen";
}

struct Section {
    std::string text;
    std::vector<StepResult> results;
    std::vector<Diagnostic> diagnostics;
};

Section check_tasks(const RunConfig& c, const Loaded& in) {
    std::vector<TaskModelRef> models;
    for (const auto& p : expand_paths(c.model_paths, ".hmst")) models.push_back(load_task_model(p));
    auto scen_paths = expand_paths(c.scenario_paths, ".scen");
    if (scen_paths.empty()) throw ConfigError("check-tasks needs task scenario files (--scenarios)");
    std::vector<EnrichedTaskScenario> scenarios;
    for (const auto& p : scen_paths) {
        scenarios.push_back(load_task_scenario(p, models));
        if (c.write_enriched && p.find(".enriched.") == std::string::npos) {
            std::ofstream out(enriched_path(p), std::ios::binary);
            if (!out) throw IoError("cannot write " + enriched_path(p));
            out << to_enriched_xml(scenarios.back());
        }
    }
    TaskCheckOptions opts;
    opts.skip_task_names = c.skip_task_names;
    for (const auto& m : models) {
        for (const auto& [id, t] : m.tasks) opts.reference_task_names.push_back(t.name);
    }
    for (const auto& p : scen_paths) opts.artifact_path += (opts.artifact_path.empty() ? "" : ",") + p;

    Section s;
    std::ostringstream out;
    for (const auto& story : in.stories) {
        auto a = assess_task_scenarios(story, scenarios, in.catalog, opts);
        out << "== check-tasks: " << story.source_path << " ==\n";
        out << emit_console_log(a.log);
        out << emit_console_log(a.results, c.color);
        out << diagnostics_text(a.diagnostics);
        s.results.insert(s.results.end(), a.results.begin(), a.results.end());
        s.diagnostics.insert(s.diagnostics.end(), a.diagnostics.begin(), a.diagnostics.end());
    }
    out << summary_line("check-tasks", s.results);
    s.text = out.str();
    return s;
}

Section check_proto(const RunConfig& c, const Loaded& in) {
    if (!c.prototype_path) throw ConfigError("check-proto needs --prototype");
    auto proto = parse_prototype(*c.prototype_path);
    auto mapping = load_mapping(c.mapping_path.value_or(default_data_dir() + "/balsamiq.mapping"));
    Section s;
    std::ostringstream out;
    for (const auto& w : proto.warnings) out << "warning: " << w << "\n";
    for (const auto& story : in.stories) {
        auto results = assess_prototype(story, proto, in.catalog, mapping, c.mode);
        out << "== check-proto: " << story.source_path << " vs " << proto.source_path << " ==\n";
        out << emit_console_log(results, c.color);
        s.results.insert(s.results.end(), results.begin(), results.end());
    }
    out << summary_line("check-proto", s.results);
    s.text = out.str();
    return s;
}

Section check_gui(const RunConfig& c, const Loaded& in) {
    if (!c.page_map_path) throw ConfigError("check-gui needs --page-map");
    auto map = load_page_map(*c.page_map_path);
    GuiCheckOptions opts;
    opts.mode = c.mode;
    opts.seed = c.seed;
    for (const auto& p : c.pending) opts.pending.push_back(parse_pending_marker(p));
    if (c.dataset_path) opts.dataset = load_dataset(*c.dataset_path);
    StaticDomRunner runner(map);
    Section s;
    std::ostringstream out;
    for (const auto& story : in.stories) {
        auto results = assess_final_gui(story, map, in.catalog, runner, opts);
        out << "== check-gui: " << story.source_path << " vs " << map.source_path << " ==\n";
        out << emit_console_log(results, c.color);
        s.results.insert(s.results.end(), results.begin(), results.end());
    }
    out << summary_line("check-gui", s.results);
    s.text = out.str();
    return s;
}

int run_lint(const RunConfig& c, std::ostream& out) {
    auto catalog = load_catalog(resolve_catalog_path(c.catalog_path));
    auto paths = expand_paths(c.story_paths, ".story");
    if (paths.empty()) throw ConfigError("no story files given (--stories)");
    auto findings = lint(paths, catalog);
    int bad = 0;
    for (const auto& f : findings) {
        if (f.recognized) continue;
        ++bad;
        out << f.path << ":" << f.line << ": no step is matching: " << f.step;
        if (!f.note.empty()) out << " (" << f.note << ")";
        out << "\n";
    }
    out << "lint: " << findings.size() << " steps, " << bad << " not recognized\n";
    return bad > 0 ? 1 : 0;
}

Mode parse_mode(const std::string& s) {
    auto f = text::fold_case(s);
    if (f == "fail-fast" || f == "failfast") return Mode::FailFast;
    if (f == "continue") return Mode::Continue;
    throw ConfigError("--mode must be fail-fast or continue");
}

}  // namespace

std::string default_data_dir() { return BAC_DEFAULT_DATA_DIR; }

std::string resolve_catalog_path(const std::optional<std::string>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("BAC_CATALOG"); env && *env) return env;
    return default_data_dir() + "/catalog.json";
}

std::vector<std::string> expand_paths(const std::vector<std::string>& paths, const std::string& extension) {
    std::vector<std::string> out;
    for (const auto& p : paths) {
        if (!fs::is_directory(p)) {
            if (!fs::exists(p)) throw IoError("cannot read " + p);
            out.push_back(p);
            continue;
        }
        std::vector<std::string> found;
        for (const auto& e : fs::directory_iterator(p)) {
            auto name = e.path().filename().string();
            if (e.is_regular_file() && name.size() > extension.size() &&
                name.compare(name.size() - extension.size(), extension.size(), extension) == 0)
                found.push_back(e.path().string());
        }
        std::sort(found.begin(), found.end());
        // A preformatted copy next to its raw source is not a second scenario.
        std::erase_if(found, [&](const std::string& f) {
            auto pos = f.rfind(".enriched" + extension);
            if (pos == std::string::npos || pos + 9 + extension.size() != f.size()) return false;
            return std::find(found.begin(), found.end(), f.substr(0, pos) + extension) != found.end();
        });
        out.insert(out.end(), found.begin(), found.end());
    }
    return out;
}

std::vector<LintFinding> lint(const std::vector<std::string>& story_paths, const OntologyCatalog& catalog) {
    std::vector<LintFinding> out;
    for (const auto& path : story_paths) {
        auto story = load_story(path);
        for (const auto& sc : story.scenarios) {
            for (const auto& st : sc.steps) {
                LintFinding f;
                f.path = path;
                f.line = st.line_number;
                f.step = step_line(st);
                f.recognized = match_step(st, catalog).has_value();
                if (!f.recognized) {
                    auto ids = template_matches_ignoring_keyword(st, catalog);
                    if (!ids.empty()) {
                        f.note = "phrase of " + ids.front() + " is not allowed after " +
                                 std::string(keyword_name(st.resolved_keyword));
                    }
                }
                out.push_back(std::move(f));
            }
        }
    }
    return out;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        if (c.command == Command::Lint) return run_lint(c, out);
        auto in = load_inputs(c);
        RunConfig tasks_cfg = c;
        tasks_cfg.mode = Mode::Continue;

        std::vector<Section> sections;
        if (c.command == Command::CheckAll) {
            if (!c.prototype_path || !c.page_map_path || c.scenario_paths.empty())
                throw ConfigError("check-all needs --scenarios, --prototype and --page-map");
        }
        if (c.command == Command::CheckTasks || c.command == Command::CheckAll) sections.push_back(check_tasks(tasks_cfg, in));
        if (c.command == Command::CheckProto || c.command == Command::CheckAll) sections.push_back(check_proto(c, in));
        if (c.command == Command::CheckGui || c.command == Command::CheckAll) sections.push_back(check_gui(c, in));

        std::vector<StepResult> results;
        std::vector<Diagnostic> diagnostics;
        for (const auto& s : sections) {
            out << s.text;
            results.insert(results.end(), s.results.begin(), s.results.end());
            diagnostics.insert(diagnostics.end(), s.diagnostics.begin(), s.diagnostics.end());
        }
        if (c.report_out) write_json_report(*c.report_out, results, diagnostics);
        return has_inconsistencies(results) ? 1 : 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Checks user-interface design artifacts against BDD stories", "bac"};
    app.require_subcommand(1);

    RunConfig c;
    std::string mode;
    struct Spec {
        const char* name;
        const char* help;
        Command command;
    };
    const Spec specs[] = {
        {"lint", "Report steps that match no ontology behavior", Command::Lint},
        {"check-tasks", "Assess task-model scenarios", Command::CheckTasks},
        {"check-proto", "Assess a Balsamiq prototype", Command::CheckProto},
        {"check-gui", "Assess final GUI documents through a page map", Command::CheckGui},
        {"check-all", "Run check-tasks, check-proto and check-gui", Command::CheckAll},
    };
    std::vector<std::pair<CLI::App*, Command>> subs;
    for (const auto& s : specs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        subs.emplace_back(sub, s.command);
        sub->add_option("--stories", c.story_paths, "Story files or directories")->required();
        sub->add_option("--catalog", c.catalog_path, "Ontology catalog (default: $BAC_CATALOG or the shipped one)");
        if (s.command == Command::Lint) continue;
        sub->add_option("--report-out", c.report_out, "Write a JSON report");
        sub->add_flag("--color", c.color, "ANSI colors in the console log");
        if (s.command == Command::CheckTasks || s.command == Command::CheckAll) {
            sub->add_option("--scenarios", c.scenario_paths, "Task scenario files (.scen) or directories");
            sub->add_option("--models", c.model_paths, "Reference task models (.hmst) or directories");
            sub->add_option("--skip-task-names", c.skip_task_names, "Task names ignored when matching");
            sub->add_flag("--write-enriched", c.write_enriched, "Write preformatted .enriched.scen files");
        }
        if (s.command != Command::CheckTasks) {
            sub->add_option("--mode", mode, "fail-fast (default) or continue");
        }
        if (s.command == Command::CheckProto || s.command == Command::CheckAll) {
            sub->add_option("--prototype", c.prototype_path, "Balsamiq mockup (.bmml)");
            sub->add_option("--mapping", c.mapping_path, "Abstract element to control type mapping");
        }
        if (s.command == Command::CheckGui || s.command == Command::CheckAll) {
            sub->add_option("--page-map", c.page_map_path, "Screen and element map (JSON)");
            sub->add_option("--seed", c.seed, "Seed for random data behaviors");
            sub->add_option("--pending", c.pending, "Pending steps as scenario:step or scenario:*");
            sub->add_option("--dataset", c.dataset_path, "key=value file for data provider behaviors");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    for (const auto& [sub, command] : subs) {
        if (sub->parsed()) c.command = command;
    }
    try {
        if (!mode.empty()) c.mode = parse_mode(mode);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return run(c, out, err);
}

}  // namespace bac
