#pragma once

#include <string>

#include "bac/ontology.hpp"
#include "bac/protocheck.hpp"
#include "bac/story.hpp"

namespace bactest {

inline std::string fixture(const std::string& rel) { return std::string(BAC_FIXTURE_DIR) + "/" + rel; }
inline std::string data_file(const std::string& rel) { return std::string(BAC_DATA_DIR) + "/" + rel; }

inline const bac::OntologyCatalog& catalog() {
    static const auto c = bac::load_catalog(data_file("catalog.json"));
    return c;
}

inline const bac::ConcreteMapping& mapping() {
    static const auto m = bac::load_mapping(data_file("balsamiq.mapping"));
    return m;
}

inline bac::Story story_from(const std::string& text) { return bac::parse_story(text, "<test>"); }

}  // namespace bactest
