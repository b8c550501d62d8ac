#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bac/ontology.hpp"
#include "bac/protocheck.hpp"

namespace bac {

enum class Command { Lint, CheckTasks, CheckProto, CheckGui, CheckAll };

struct RunConfig {
    Command command = Command::Lint;
    std::vector<std::string> story_paths;
    std::vector<std::string> scenario_paths;
    std::vector<std::string> model_paths;
    std::optional<std::string> prototype_path;
    std::optional<std::string> page_map_path;
    std::optional<std::string> catalog_path;
    std::optional<std::string> mapping_path;
    std::optional<std::string> dataset_path;
    std::optional<std::string> report_out;
    Mode mode = Mode::FailFast;
    std::uint32_t seed = 0;
    std::vector<std::string> pending;
    std::vector<std::string> skip_task_names;
    bool color = false;
    bool write_enriched = false;
};

struct LintFinding {
    std::string path;
    int line = 0;
    std::string step;
    bool recognized = true;
    std::string note;
};

std::vector<LintFinding> lint(const std::vector<std::string>& story_paths, const OntologyCatalog& catalog);

/// Catalog path: explicit flag, then $BAC_CATALOG, then the shipped copy.
std::string resolve_catalog_path(const std::optional<std::string>& flag);
std::string default_data_dir();

/// Expands directories into the files with the given extension, sorted.
std::vector<std::string> expand_paths(const std::vector<std::string>& paths, const std::string& extension);

/// 0 clean, 1 inconsistencies or unrecognized steps, 2 usage/IO/config error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and runs; never throws.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bac
