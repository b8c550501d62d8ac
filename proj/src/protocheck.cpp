#include "bac/protocheck.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "bac/markup.hpp"
#include "bac/text.hpp"

namespace bac {

namespace {

constexpr std::string_view kLabel = "com.balsamiq.mockups::Label";
constexpr std::string_view kGroup = "__group__";
constexpr std::string_view kBrowserWindow = "com.balsamiq.mockups::BrowserWindow";

constexpr std::array<std::string_view, 10> kStateTransition{
    "willBeDisplayed",
    "willNotBeDisplayed",
    "willBeDisplayedInTheFieldTheValue",
    "willNotBeDisplayedInTheFieldTheValue",
    "willBeDisplayedTheValueInTheFieldReferringTo",
    "willNotBeDisplayedTheValueInTheFieldReferringTo",
    "confirmTheDialogBox",
    "cancelTheDialogBox",
    "informTheValueInTheDialogBox",
    "willBeDisplayedInTheDialogBox",
};

constexpr std::array<std::string_view, 3> kPageIdentity{"goTo", "goToWithTheParameters", "isDisplayed"};

bool is_group(const PrototypeControl& c) { return c.control_type_id.find(kGroup) != std::string::npos; }
bool is_label(const PrototypeControl& c) { return c.control_type_id == kLabel; }

bool text_matches(const PrototypeControl& c, std::string_view field) {
    return c.text && text::same_name(*c.text, field);
}

std::string qualified(std::string_view type) {
    if (type == "*" || type.find("::") != std::string_view::npos) return std::string(type);
    return std::string(kBalsamiqPrefix) + std::string(type);
}

std::string short_type(std::string_view type) {
    auto p = type.rfind("::");
    return std::string(p == std::string_view::npos ? type : type.substr(p + 2));
}

class PrototypeReader {
public:
    PrototypeReader(const markup::Document& doc, const std::string& origin, Prototype& proto)
        : doc_(doc), origin_(origin), proto_(proto) {}

    void read_controls(markup::NodeId container, const std::optional<std::string>& group) {
        std::set<std::string> ids;
        for (auto id : doc_.element_children(container)) {
            if (doc_.node(id).name != "control") continue;
            const auto& n = doc_.node(id);
            PrototypeControl c;
            c.line = n.line;
            c.control_id = need(id, "controlID");
            c.control_type_id = need(id, "controlTypeID");
            if (!ids.insert(c.control_id).second) {
                throw ParseError(origin_ + ":" + std::to_string(n.line) + ": duplicate controlID '" + c.control_id +
                                 "' at " + doc_.path(id));
            }
            if (const auto* g = n.attr("isInGroup"); g && text::trim(*g) != "-1" && !text::trim(*g).empty()) {
                c.group_id = text::trim(*g);
            } else {
                c.group_id = group;
            }
            for (auto props : doc_.element_children(id)) {
                if (doc_.node(props).name != "controlProperties") continue;
                for (auto t : doc_.element_children(props)) {
                    if (doc_.node(t).name != "text") continue;
                    auto decoded = text::percent_decode(doc_.text_content(t));
                    if (decoded.had_invalid_escape) {
                        proto_.warnings.push_back(origin_ + ":" + std::to_string(doc_.node(t).line) +
                                                  ": invalid percent escape kept verbatim in control " + c.control_id);
                    }
                    c.text = decoded.text;
                }
            }
            auto gid = (group ? *group + "/" : std::string()) + c.control_id;
            bool grouping = is_group(c);
            proto_.controls.push_back(std::move(c));
            if (!grouping) continue;
            for (auto child : doc_.element_children(id)) {
                if (doc_.node(child).name != "groupChildrenDescriptors") continue;
                read_controls(child, gid);
            }
        }
    }

private:
    const markup::Document& doc_;
    const std::string& origin_;
    Prototype& proto_;

    std::string need(markup::NodeId id, std::string_view attr) {
        const auto* v = doc_.node(id).attr(attr);
        if (!v || v->empty()) {
            throw ParseError(origin_ + ":" + std::to_string(doc_.node(id).line) + ": <control> without " +
                             std::string(attr) + " at " + doc_.path(id));
        }
        return *v;
    }
};

std::string describe(const PrototypeControl& c) {
    std::string s = c.control_id + " " + short_type(c.control_type_id);
    s += " text=" + (c.text ? "\"" + *c.text + "\"" : std::string("-"));
    if (c.group_id) s += " group=" + *c.group_id;
    return s;
}

std::string snapshot_for(const Prototype& proto, std::string_view subject) {
    std::ostringstream out;
    int n = 0;
    for (const auto& c : proto.controls) {
        if (!c.text) continue;
        if (text::same_name(*c.text, subject) || text::is_near_name(*c.text, subject)) {
            out << describe(c) << "\n";
            ++n;
        }
    }
    if (n > 0) return out.str();
    for (const auto& c : proto.controls) {
        if (is_group(c)) continue;
        out << describe(c) << "\n";
        if (++n == 20) break;
    }
    return out.str();
}

std::vector<std::string> control_texts(const Prototype& proto) {
    std::vector<std::string> out;
    for (const auto& c : proto.controls) {
        if (c.text && !text::trim(*c.text).empty()) out.push_back(*c.text);
    }
    if (!proto.mockup_name.empty()) out.push_back(proto.mockup_name);
    return out;
}

std::string types_list(const std::set<std::string>& types) {
    std::string s;
    for (const auto& t : types) s += (s.empty() ? "" : ", ") + short_type(t);
    return s;
}

std::optional<std::string> target_value(const StepBinding& b, const OntologyCatalog& catalog) {
    auto target = catalog.at(b.behavior_id).target;
    if (!target) target = catalog.canonical(b.behavior_id).target;
    if (!target) return std::nullopt;
    const auto* v = b.value(*target);
    if (!v) return std::nullopt;
    return *v;
}

int page_count(std::string_view page, const Prototype& proto, std::string& evidence) {
    int windows = 0;
    for (const auto& c : proto.controls) {
        if (c.control_type_id != kBrowserWindow || !c.text) continue;
        auto first_line = text::split(*c.text, '\n').front();
        if (text::same_name(*c.text, page) || text::same_name(first_line, page)) ++windows;
    }
    if (windows > 0) {
        evidence = "BrowserWindow \"" + std::string(page) + "\" found " + std::to_string(windows) + " time(s)";
        return windows;
    }
    if (!proto.mockup_name.empty() && text::same_name(proto.mockup_name, page)) {
        evidence = "mockup name \"" + proto.mockup_name + "\"";
        return 1;
    }
    evidence = "no BrowserWindow or mockup named \"" + std::string(page) + "\"";
    return 0;
}

}  // namespace

MappingGap::MappingGap(std::string behavior_id, std::string abstract_element)
    : Error("no concrete mapping for element '" + abstract_element + "' (needed by " + behavior_id + ")"),
      element_(std::move(abstract_element)) {}

bool is_state_transition(std::string_view behavior_id) {
    return std::find(kStateTransition.begin(), kStateTransition.end(), behavior_id) != kStateTransition.end();
}

bool is_page_identity(std::string_view behavior_id) {
    return std::find(kPageIdentity.begin(), kPageIdentity.end(), behavior_id) != kPageIdentity.end();
}

Prototype parse_prototype_xml(std::string_view xml, const std::string& origin) {
    auto doc = markup::parse_xml(xml, origin);
    Prototype proto;
    proto.source_path = origin;
    auto root = doc.document_element();
    if (!root || doc.node(*root).name != "mockup") throw ParseError(origin + ": root element must be <mockup>");
    if (const auto* name = doc.node(*root).attr("name")) proto.mockup_name = text::trim(*name);
    PrototypeReader reader(doc, origin, proto);
    for (auto c : doc.element_children(*root)) {
        if (doc.node(c).name == "controls") reader.read_controls(c, std::nullopt);
    }
    return proto;
}

Prototype parse_prototype(const std::string& path) { return parse_prototype_xml(read_file(path), path); }

const std::set<std::string>* ConcreteMapping::find(std::string_view abstract_element) const {
    auto it = entries.find(text::canonical(abstract_element));
    return it == entries.end() ? nullptr : &it->second;
}

ConcreteMapping parse_mapping(std::string_view source, const std::string& origin) {
    ConcreteMapping m;
    int line_no = 0;
    for (const auto& raw : text::split(source, '\n')) {
        ++line_no;
        auto line = text::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'Element = type, ...'");
        }
        auto key = text::trim(std::string_view(line).substr(0, eq));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty element name");
        auto& types = m.entries[text::canonical(key)];
        for (const auto& t : text::split(std::string_view(line).substr(eq + 1), ',')) {
            auto v = text::trim(t);
            if (!v.empty()) types.insert(qualified(v));
        }
        if (types.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) + ": no control types for " + key);
    }
    if (m.entries.empty()) throw ConfigError(origin + ": empty mapping");
    return m;
}

ConcreteMapping load_mapping(const std::string& path) { return parse_mapping(read_file(path), path); }

std::set<std::string> supported_control_types(std::string_view behavior_id, const OntologyCatalog& catalog,
                                              const ConcreteMapping& mapping) {
    std::set<std::string> out;
    for (const auto& t : catalog.canonical(behavior_id).elements) {
        if (!t.prototype_control) continue;
        const auto* types = mapping.find(t.abstract_element);
        if (!types) throw MappingGap(std::string(behavior_id), t.abstract_element);
        out.insert(types->begin(), types->end());
    }
    return out;
}

bool type_supported(std::string_view control_type_id, const std::set<std::string>& supported) {
    if (control_type_id.find(kGroup) != std::string_view::npos) return false;
    return supported.count("*") > 0 || supported.count(std::string(control_type_id)) > 0;
}

ElementCount count_elements(std::string_view field_name, const std::set<std::string>& supported,
                            const Prototype& proto) {
    ElementCount out;
    const auto& cs = proto.controls;
    auto supported_sibling_count = [&](const PrototypeControl& label) {
        int n = 0;
        for (const auto& s : cs) {
            if (&s != &label && s.group_id == label.group_id && type_supported(s.control_type_id, supported)) ++n;
        }
        return n;
    };
    auto has_other_member = [&](const PrototypeControl& label) {
        return std::any_of(cs.begin(), cs.end(), [&](const PrototypeControl& s) {
            return &s != &label && s.group_id == label.group_id && !is_group(s);
        });
    };

    bool matching_label_alone = false;
    for (const auto& c : cs) {
        if (is_group(c) || !text_matches(c, field_name)) continue;
        bool supported_type = type_supported(c.control_type_id, supported);
        if (!c.group_id) {
            if (supported_type) {
                ++out.count;
                ++out.per_control_count;
            } else if (is_label(c)) {
                matching_label_alone = true;
            } else {
                out.type_rejected = true;
            }
            continue;
        }
        if (is_label(c)) {
            int siblings = supported_sibling_count(c);
            if (siblings > 0) {
                ++out.count;
                out.per_control_count += siblings;
            } else if (has_other_member(c)) {
                out.type_rejected = true;
            } else {
                matching_label_alone = true;
            }
        } else if (supported_type) {
            ++out.count;
            ++out.per_control_count;
        } else {
            out.type_rejected = true;
        }
    }
    if (out.count == 0 && matching_label_alone) {
        out.label_in_other_group = std::any_of(cs.begin(), cs.end(), [&](const PrototypeControl& s) {
            return !is_label(s) && type_supported(s.control_type_id, supported);
        });
        if (!out.label_in_other_group) out.type_rejected = true;
    }
    return out;
}

int count_matching_elements(std::string_view field_name, const std::set<std::string>& supported_types,
                            const Prototype& proto) {
    return count_elements(field_name, supported_types, proto).count;
}

std::vector<StepResult> assess_prototype(const Story& story, const Prototype& proto, const OntologyCatalog& catalog,
                                         const ConcreteMapping& mapping, Mode mode) {
    std::vector<StepResult> results;
    auto candidates = control_texts(proto);
    for (const auto& scenario : story.scenarios) {
        bool stopped = false;
        for (const auto& step : scenario.steps) {
            StepResult r;
            r.story_title = story.title;
            r.scenario_title = scenario.title;
            r.step_text = step_line(step);
            r.line = step.line_number;
            r.artifact = Artifact::Prototype;
            r.artifact_path = proto.source_path;
            if (stopped) {
                r.status = Status::NotPerformed;
                results.push_back(std::move(r));
                continue;
            }

            auto binding = match_step(step, catalog);
            if (!binding) {
                r.status = Status::Unrecognized;
                r.evidence = "no step is matching the ontology";
                results.push_back(std::move(r));
                continue;
            }
            const auto& canonical_id = catalog.canonical(binding->behavior_id).id;

            if (is_state_transition(canonical_id)) {
                r.evidence = "interaction between screens cannot be traced on a static prototype";
                r.expected = "1";
                r.actual = "0";
                FailureEvidence ev;
                ev.artifact = Artifact::Prototype;
                ev.signal = FailureSignal::StateTransition;
                mark_failed(r, ev);
            } else {
                auto types = supported_control_types(binding->behavior_id, catalog, mapping);
                auto target = target_value(*binding, catalog);
                if (types.empty() || !target) {
                    r.status = Status::Skipped;
                    r.evidence = types.empty() ? "behavior has no prototype element" : "behavior has no target element";
                    results.push_back(std::move(r));
                    continue;
                }
                ElementCount counted;
                if (is_page_identity(canonical_id)) {
                    counted.count = page_count(*target, proto, r.evidence);
                } else {
                    counted = count_elements(*target, types, proto);
                    r.evidence = "numElements=" + std::to_string(counted.count) + " for \"" + *target + "\" among [" +
                                 types_list(types) + "]";
                    if ((counted.count == 1) != (counted.per_control_count == 1)) {
                        r.evidence += "; counting every grouped control instead would give " +
                                      std::to_string(counted.per_control_count);
                    }
                }
                r.expected = "1";
                r.actual = std::to_string(counted.count);
                if (counted.count == 1) {
                    r.status = Status::Passed;
                } else {
                    FailureEvidence ev;
                    ev.artifact = Artifact::Prototype;
                    ev.signal = FailureSignal::ElementCount;
                    ev.subject = *target;
                    ev.candidates = candidates;
                    ev.count = counted.count;
                    ev.label_in_other_group = counted.label_in_other_group;
                    ev.type_rejected = counted.type_rejected;
                    mark_failed(r, ev);
                    r.snapshot = snapshot_for(proto, *target);
                }
            }
            if (r.status == Status::Failed && mode == Mode::FailFast) stopped = true;
            results.push_back(std::move(r));
        }
    }
    return results;
}

}  // namespace bac
