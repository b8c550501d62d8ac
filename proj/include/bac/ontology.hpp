#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bac/error.hpp"
#include "bac/story.hpp"

namespace bac {

enum class Category { CheckboxRadio, Common, DataGeneration, DataProvider, Debug, Dialog, MouseControl, Table };
enum class Platform { Abstract, Prototype, FinalGui };

std::string_view category_name(Category c);

class CatalogError : public Error {
public:
    using Error::Error;
};

class AmbiguousMatch : public Error {
public:
    AmbiguousMatch(std::string step_text, std::vector<std::string> behavior_ids);
    const std::vector<std::string>& behavior_ids() const { return ids_; }

private:
    std::vector<std::string> ids_;
};

class UnknownBehavior : public Error {
public:
    using Error::Error;
};

/// A step phrase such as `I set "<value>" in the field "<fieldname>"`.
/// Literal runs and placeholders alternate: literals.size() == placeholders.size() + 1.
struct StepTemplate {
    std::string source;
    std::vector<std::string> literals;
    std::vector<std::string> placeholders;

    static StepTemplate parse(std::string_view source);
    bool operator==(const StepTemplate& o) const { return source == o.source; }
};

struct ElementTriple {
    std::string abstract_element;
    std::optional<std::string> prototype_control;  // bare Balsamiq name, e.g. "TextInput"
    std::optional<std::string> final_gui_kind;
};

struct BehaviorEntry {
    std::string id;
    Category category = Category::Common;
    std::vector<StepTemplate> step_templates;
    std::vector<std::string> task_templates;      // 1 or 2, applied in order
    std::vector<std::string> alt_task_templates;  // used when a placeholder is bound to ""
    std::set<Keyword> allowed_keywords;
    std::vector<ElementTriple> elements;
    std::optional<std::string> target;    // placeholder naming the affected element
    std::optional<std::string> alias_of;  // project alias of another behavior
};

struct StepBinding {
    std::string behavior_id;
    std::map<std::string, std::string> bindings;
    StepTemplate matched_template;

    const std::string* value(const std::string& placeholder) const;
};

class OntologyCatalog {
public:
    OntologyCatalog() = default;
    explicit OntologyCatalog(std::vector<BehaviorEntry> entries);

    const std::vector<BehaviorEntry>& entries() const { return entries_; }
    const BehaviorEntry* find(std::string_view id) const;
    const BehaviorEntry& at(std::string_view id) const;

    /// The behavior whose semantics an entry uses (follows alias_of).
    const BehaviorEntry& canonical(std::string_view id) const;

    /// Number of behavior rows, aliases excluded.
    std::size_t behavior_count() const;

private:
    std::vector<BehaviorEntry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

OntologyCatalog parse_catalog(std::string_view json_text, const std::string& origin = "<catalog>");
OntologyCatalog load_catalog(const std::string& path);

/// Returns the unique entry whose template matches the step (case-insensitive
/// literals, whitespace-normalized, quoted args bound in order) and whose
/// keyword set admits the step's resolved keyword. Throws AmbiguousMatch when
/// more than one entry qualifies.
std::optional<StepBinding> match_step(const Step& step, const OntologyCatalog& catalog);

/// Like match_step but ignores allowed keywords; used to explain lint failures.
std::vector<std::string> template_matches_ignoring_keyword(const Step& step, const OntologyCatalog& catalog);

std::vector<std::string> derive_task_names(const StepBinding& binding, const OntologyCatalog& catalog);

std::vector<std::string> supported_elements(std::string_view behavior_id, Platform platform,
                                            const OntologyCatalog& catalog);

/// Fills a template with values, quoting each one.
std::string render_step(const StepTemplate& tmpl, const std::vector<std::string>& values);

/// Substitutes `<name>` occurrences from the binding map.
std::string fill_task_template(std::string_view tmpl, const std::map<std::string, std::string>& values);

/// True if some task template in the catalog, with its placeholders treated as
/// wildcards, matches the name.
bool is_known_task_name(std::string_view task_name, const OntologyCatalog& catalog);

}  // namespace bac
