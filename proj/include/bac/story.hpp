#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bac/error.hpp"

namespace bac {

enum class Keyword { Given, When, Then, And, But };

std::string_view keyword_name(Keyword k);
bool is_continuation(Keyword k);

struct Step {
    Keyword raw_keyword = Keyword::Given;
    Keyword resolved_keyword = Keyword::Given;  // never And/But
    std::string text;                           // keyword stripped
    std::vector<std::string> args;              // double-quoted segments, in order
    int line_number = 0;

    bool operator==(const Step&) const = default;
};

struct Scenario {
    std::string title;
    std::vector<Step> steps;

    bool operator==(const Scenario&) const = default;
};

struct Narrative {
    std::string role;
    std::string feature;
    std::string benefit;

    bool operator==(const Narrative&) const = default;
};

struct Story {
    std::string title;
    std::optional<Narrative> narrative;
    std::vector<Scenario> scenarios;
    std::string source_path;

    bool operator==(const Story&) const = default;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::string path, int line, std::string reason);

    const std::string& path() const { return path_; }
    int line() const { return line_; }
    const std::string& reason() const { return reason_; }

private:
    std::string path_;
    int line_;
    std::string reason_;
};

/// Parses a `.story` file. Lines starting with '#' are comments; the first
/// remaining line is the title; `Narrative:` opens the As a / I want /
/// So that block; `Scenario:` (or `Scenario N:`) opens a scenario.
Story parse_story(std::string_view source, const std::string& path);

Story load_story(const std::string& path);

/// Splits step text on straight double quotes. Returns the quoted segments,
/// or nullopt when a quote is left open.
std::optional<std::vector<std::string>> extract_quoted(std::string_view text);

/// "When I choose \"Round Trip\"": raw keyword plus text.
std::string step_line(const Step& step);

/// Canonical text form; parse_story(to_story_text(s)) == s up to line numbers
/// and source path.
std::string to_story_text(const Story& story);

}  // namespace bac
