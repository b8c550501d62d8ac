#pragma once

// Generators and brute-force oracles shared by the property tests and the
// acceptance runner.

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bac/ontology.hpp"
#include "bac/protocheck.hpp"
#include "bac/story.hpp"
#include "bac/taskcheck.hpp"

namespace bactest {

inline int pick(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <class T>
const T& pick_from(std::mt19937& rng, const std::vector<T>& v) {
    return v[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(v.size()) - 1))];
}

inline std::string fold(const std::string& s) {
    std::string out;
    bool space = false;
    for (unsigned char ch : s) {
        if (std::isspace(ch)) {
            space = !out.empty();
            continue;
        }
        if (space) out += ' ';
        space = false;
        out += static_cast<char>(std::tolower(ch));
    }
    return out;
}

// ---- task scenarios ----

struct TaskInstance {
    bac::Story story;
    std::vector<bac::EnrichedTaskScenario> scenarios;
};

inline TaskInstance generate_task_instance(std::mt19937& rng) {
    static const std::vector<std::string> names = {"Search", "Departure", "Round Trip", "Home", "Flight Class"};
    static const std::vector<std::string> values = {"Paris", "Toulouse", "2"};
    std::ostringstream text;
    text << "Generated\n\nScenario: generated\n";
    int steps = pick(rng, 1, 6);
    std::vector<std::string> pool = {"Open Menu", "Provide List of Airports", "Display Results"};
    for (int i = 0; i < steps; ++i) {
        const auto& n = pick_from(rng, names);
        const auto& v = pick_from(rng, values);
        switch (pick(rng, 0, 5)) {
            case 0: text << "Given I go to \"" << n << "\"\n"; pool.push_back("Go to " + n); break;
            case 1: text << "When I click on \"" << n << "\"\n"; pool.push_back("Click on " + n); break;
            case 2: text << "When I set \"" << v << "\" in the field \"" << n << "\"\n"; pool.push_back("Set " + n); break;
            case 3:
                text << "When I inform \"" << v << "\" and choose \"" << n << "\" in the field \"F\"\n";
                pool.push_back("Inform " + v);
                pool.push_back("Choose " + n);
                break;
            case 4: text << "When I select \"" << n << "\"\n"; pool.push_back("Select " + n); break;
            default: text << "When I do a thing called \"" << n << "\"\n"; break;
        }
    }
    TaskInstance inst{bac::parse_story(text.str(), "<generated>"), {}};
    int count = pick(rng, 1, 5);
    for (int s = 0; s < count; ++s) {
        bac::EnrichedTaskScenario sc;
        sc.name = "S" + std::to_string(s + 1);
        int len = pick(rng, 0, 8);
        for (int t = 0; t < len; ++t) {
            auto name = pick_from(rng, pool);
            if (pick(rng, 0, 5) == 0) {
                for (auto& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            }
            sc.tasks.push_back(bac::EnrichedTask{name, pick(rng, 0, 1) == 1, std::nullopt});
        }
        inst.scenarios.push_back(std::move(sc));
    }
    return inst;
}

struct OracleSearch {
    std::string task;
    int expected = 0;
    std::vector<std::vector<int>> positions;  // per task scenario
};

struct OracleStep {
    bool recognized = false;
    std::vector<OracleSearch> searches;
    bool consistent = false;
};

// Exhaustive scan of every (scenario, index) pair for every search string.
inline std::vector<OracleStep> task_oracle(const bac::Scenario& bdd,
                                           const std::vector<bac::EnrichedTaskScenario>& scenarios,
                                           const bac::OntologyCatalog& catalog) {
    std::vector<OracleStep> out;
    int position = 0;
    for (const auto& step : bdd.steps) {
        OracleStep o;
        auto binding = bac::match_step(step, catalog);
        if (binding) {
            o.recognized = true;
            o.consistent = true;
            for (const auto& task : bac::derive_task_names(*binding, catalog)) {
                OracleSearch s{task, ++position, {}};
                bool hit = false;
                for (const auto& sc : scenarios) {
                    std::vector<int> found;
                    for (std::size_t i = 0; i < sc.tasks.size(); ++i) {
                        if (fold(sc.tasks[i].name) == fold(task)) found.push_back(static_cast<int>(i + 1));
                    }
                    if (std::find(found.begin(), found.end(), s.expected) != found.end()) hit = true;
                    s.positions.push_back(found);
                }
                o.consistent = o.consistent && hit;
                o.searches.push_back(std::move(s));
            }
        }
        out.push_back(std::move(o));
    }
    return out;
}

// ---- prototypes ----

inline const std::string kNs = "com.balsamiq.mockups::";

struct ProtoInstance {
    bac::Prototype proto;
    std::string field;
    std::set<std::string> supported;
};

inline ProtoInstance generate_proto_instance(std::mt19937& rng) {
    static const std::vector<std::string> types = {"Label",    "Button",   "TextInput",   "SearchBox",
                                                   "ComboBox", "CheckBox", "RadioButton", "Paragraph"};
    static const std::vector<std::string> texts = {"Search", "search", "Departure", "DEPARTURE", "Departure  Date",
                                                   "Round Trip", "Companies"};
    ProtoInstance inst;
    int groups = pick(rng, 0, 4);
    int controls = pick(rng, 0, 12);
    for (int i = 0; i < controls; ++i) {
        bac::PrototypeControl c;
        c.control_id = std::to_string(i);
        c.control_type_id = kNs + pick_from(rng, types);
        if (pick(rng, 0, 6) > 0) c.text = pick_from(rng, texts);
        int g = groups ? pick(rng, 0, groups) : 0;
        if (g > 0) c.group_id = "g" + std::to_string(g);
        inst.proto.controls.push_back(std::move(c));
    }
    inst.field = pick_from(rng, std::vector<std::string>{"Search", "Departure", "Departure Date", "Companies"});
    if (pick(rng, 0, 9) == 0) {
        inst.supported.insert("*");
    } else {
        int k = pick(rng, 1, 4);
        for (int i = 0; i < k; ++i) inst.supported.insert(kNs + pick_from(rng, types));
    }
    return inst;
}

// Enumerates ungrouped controls, then every group and every member of it.
inline int proto_oracle(const std::string& field, const std::set<std::string>& supported,
                        const bac::Prototype& proto) {
    auto is_supported = [&](const bac::PrototypeControl& c) {
        if (c.control_type_id.find("__group__") != std::string::npos) return false;
        return supported.count("*") > 0 || supported.count(c.control_type_id) > 0;
    };
    auto names = [&](const bac::PrototypeControl& c) { return c.text && fold(*c.text) == fold(field); };
    const std::string label = kNs + "Label";

    int n = 0;
    for (const auto& c : proto.controls) {
        if (!c.group_id && names(c) && is_supported(c)) ++n;
    }
    std::set<std::string> groups;
    for (const auto& c : proto.controls) {
        if (c.group_id) groups.insert(*c.group_id);
    }
    for (const auto& g : groups) {
        std::vector<const bac::PrototypeControl*> members;
        for (const auto& c : proto.controls) {
            if (c.group_id == g && c.control_type_id.find("__group__") == std::string::npos) members.push_back(&c);
        }
        for (const auto* m : members) {
            if (!names(*m)) continue;
            if (m->control_type_id != label) {
                if (is_supported(*m)) ++n;
                continue;
            }
            bool partner = false;
            for (const auto* other : members) {
                if (other != m && is_supported(*other)) partner = true;
            }
            if (partner) ++n;
        }
    }
    return n;
}

// Scenarios over the portal fixture.
inline const std::vector<std::string> kGuiStepPool = {
    "When I set \"Ann\" in the field \"Name\"",
    "When I set \"ABCD\" in the field \"Code\"",
    "When I set \"Lyon\" in the field \"City\"",
    "When I choose \"Basic\"",
    "When I select \"Newsletter\"",
    "Then the field \"Newsletter\" is checked",
    "When I click on \"Details\"",
    "When I click on \"Back\"",
    "Then \"Portal\" is displayed",
    "When I click on \"Delete\"",
    "When I confirm the dialog box",
    "When I inform a random number in the field \"Member\"",
    "When I inform a random number with prefix \"Z\" in the field \"Name\"",
    "Then will be displayed \"Welcome to the portal\"",
    "When I choose the option of value \"Italy\" in the field \"Country\"",
    "When I click on \"Edit\" referring to \"Alice\"",
    "Given I go to \"Details\"",
    "Given I go to \"Portal\"",
};

inline std::string random_gui_scenario(std::mt19937& rng, const std::string& title) {
    std::string s = "Scenario: " + title + "\nGiven I go to \"Portal\"\n";
    int n = bactest::pick(rng, 1, 6);
    for (int i = 0; i < n; ++i) s += bactest::pick_from(rng, kGuiStepPool) + "\n";
    return s;
}

}  // namespace bactest
