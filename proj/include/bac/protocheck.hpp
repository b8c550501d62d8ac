#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bac/error.hpp"
#include "bac/ontology.hpp"
#include "bac/report.hpp"
#include "bac/story.hpp"

namespace bac {

inline constexpr std::string_view kBalsamiqPrefix = "com.balsamiq.mockups::";

class MappingGap : public Error {
public:
    MappingGap(std::string behavior_id, std::string abstract_element);
    const std::string& abstract_element() const { return element_; }

private:
    std::string element_;
};

struct PrototypeControl {
    std::string control_id;
    std::string control_type_id;  // namespaced
    std::optional<std::string> text;
    std::optional<std::string> group_id;
    int line = 0;

    bool operator==(const PrototypeControl&) const = default;
};

struct Prototype {
    std::vector<PrototypeControl> controls;
    std::string source_path;
    std::string mockup_name;  // `<mockup name="...">`, empty when undeclared
    std::vector<std::string> warnings;
};

/// Reads `<mockup><controls><control .../>` files. Children of a `__group__`
/// control (under `groupChildrenDescriptors`) belong to that group unless
/// they carry their own `isInGroup`. `isInGroup="-1"` means no group.
Prototype parse_prototype_xml(std::string_view xml, const std::string& origin);
Prototype parse_prototype(const std::string& path);

/// Abstract element -> namespaced control types; "*" is a wildcard for any
/// non-group control.
struct ConcreteMapping {
    std::map<std::string, std::set<std::string>> entries;  // keyed by canonical abstract name

    const std::set<std::string>* find(std::string_view abstract_element) const;
};

ConcreteMapping parse_mapping(std::string_view source, const std::string& origin);
ConcreteMapping load_mapping(const std::string& path);

/// Control types able to carry the behavior on a prototype. Empty when the
/// behavior has no prototype column. Throws MappingGap.
std::set<std::string> supported_control_types(std::string_view behavior_id, const OntologyCatalog& catalog,
                                              const ConcreteMapping& mapping);

bool type_supported(std::string_view control_type_id, const std::set<std::string>& supported);

struct ElementCount {
    int count = 0;
    int per_control_count = 0;  // counting every supported group member under a matching label
    bool label_in_other_group = false;
    bool type_rejected = false;
};

/// Ungrouped controls with the text and a supported type, plus one per
/// (matching Label, group) whose group holds a supported sibling, plus
/// grouped non-Label controls with the text and a supported type.
ElementCount count_elements(std::string_view field_name, const std::set<std::string>& supported_types,
                            const Prototype& proto);

int count_matching_elements(std::string_view field_name, const std::set<std::string>& supported_types,
                            const Prototype& proto);

enum class Mode { FailFast, Continue };

std::vector<StepResult> assess_prototype(const Story& story, const Prototype& proto, const OntologyCatalog& catalog,
                                         const ConcreteMapping& mapping, Mode mode = Mode::FailFast);

/// Behaviors that need a screen change or a dialog and cannot be checked on
/// a single static mockup.
bool is_state_transition(std::string_view behavior_id);

/// Behaviors asserting which page is shown.
bool is_page_identity(std::string_view behavior_id);

}  // namespace bac
