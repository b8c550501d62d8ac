#include "bac/story.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "bac/text.hpp"

namespace bac {

namespace {

struct KeywordSpelling {
    std::string_view word;
    Keyword keyword;
};

constexpr std::array<KeywordSpelling, 5> kKeywords{{
    {"Given", Keyword::Given},
    {"When", Keyword::When},
    {"Then", Keyword::Then},
    {"And", Keyword::And},
    {"But", Keyword::But},
}};

std::optional<std::pair<Keyword, std::string>> split_keyword(const std::string& line) {
    for (const auto& k : kKeywords) {
        if (line.size() > k.word.size() && line.compare(0, k.word.size(), k.word) == 0 &&
            (line[k.word.size()] == ' ' || line[k.word.size()] == '\t')) {
            return std::make_pair(k.keyword, text::trim(std::string_view(line).substr(k.word.size())));
        }
    }
    return std::nullopt;
}

// "Scenario:", "Scenario 2:", case-sensitive like the step keywords.
std::optional<std::string> scenario_title(const std::string& line) {
    constexpr std::string_view kHead = "Scenario";
    if (line.compare(0, kHead.size(), kHead) != 0) return std::nullopt;
    std::size_t i = kHead.size();
    while (i < line.size() && line[i] == ' ') ++i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || line[i] != ':') return std::nullopt;
    return text::trim(std::string_view(line).substr(i + 1));
}

std::string strip_trailing_punct(std::string s) {
    while (!s.empty() && (s.back() == '.' || s.back() == ',' || s.back() == ';' || s.back() == '!')) s.pop_back();
    return text::trim(s);
}

// Finds the first case-insensitive occurrence of one of the markers at a word
// boundary; returns (position, marker length).
std::optional<std::pair<std::size_t, std::size_t>> find_marker(const std::string& folded,
                                                               std::initializer_list<std::string_view> markers,
                                                               std::size_t from) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (auto m : markers) {
        for (std::size_t pos = folded.find(m, from); pos != std::string::npos; pos = folded.find(m, pos + 1)) {
            bool left_ok = pos == 0 || folded[pos - 1] == ' ';
            std::size_t end = pos + m.size();
            bool right_ok = end == folded.size() || folded[end] == ' ';
            if (left_ok && right_ok) {
                if (!best || pos < best->first) best = std::make_pair(pos, m.size());
                break;
            }
        }
    }
    return best;
}

std::optional<Narrative> parse_narrative(const std::string& body) {
    auto flat = text::normalize_ws(body);
    auto folded = text::fold_case(flat);
    auto as = find_marker(folded, {"as an", "as a"}, 0);
    if (!as) return std::nullopt;
    auto want = find_marker(folded, {"i want"}, as->first + as->second);
    if (!want) return std::nullopt;
    auto so = find_marker(folded, {"so that"}, want->first + want->second);
    if (!so) return std::nullopt;
    Narrative n;
    n.role = strip_trailing_punct(flat.substr(as->first + as->second, want->first - as->first - as->second));
    n.feature = strip_trailing_punct(flat.substr(want->first + want->second, so->first - want->first - want->second));
    n.benefit = strip_trailing_punct(flat.substr(so->first + so->second));
    if (n.role.empty() || n.feature.empty() || n.benefit.empty()) return std::nullopt;
    return n;
}

}  // namespace

std::string_view keyword_name(Keyword k) {
    for (const auto& s : kKeywords) {
        if (s.keyword == k) return s.word;
    }
    return "?";
}

std::string step_line(const Step& step) { return std::string(keyword_name(step.raw_keyword)) + " " + step.text; }

bool is_continuation(Keyword k) { return k == Keyword::And || k == Keyword::But; }

SyntaxError::SyntaxError(std::string path, int line, std::string reason)
    : Error(path + ":" + std::to_string(line) + ": " + reason),
      path_(std::move(path)),
      line_(line),
      reason_(std::move(reason)) {}

std::optional<std::vector<std::string>> extract_quoted(std::string_view text) {
    std::vector<std::string> args;
    std::size_t pos = 0;
    while (true) {
        auto open = text.find('"', pos);
        if (open == std::string_view::npos) return args;
        auto close = text.find('"', open + 1);
        if (close == std::string_view::npos) return std::nullopt;
        args.emplace_back(text.substr(open + 1, close - open - 1));
        pos = close + 1;
    }
}

Story parse_story(std::string_view source, const std::string& path) {
    if (source.substr(0, 3) == "\xEF\xBB\xBF") source.remove_prefix(3);

    Story story;
    story.source_path = path;

    enum class Section { Preamble, Narrative, Scenarios };
    Section section = Section::Preamble;
    std::string narrative_body;
    int narrative_line = 0;
    Scenario* current = nullptr;
    int current_line = 0;
    std::optional<Keyword> last_primary;

    auto close_narrative = [&]() {
        if (section != Section::Narrative) return;
        story.narrative = parse_narrative(narrative_body);
        if (!story.narrative) {
            throw SyntaxError(path, narrative_line, "narrative needs non-empty 'As a', 'I want' and 'So that' parts");
        }
    };
    auto close_scenario = [&]() {
        if (current && current->steps.empty()) throw SyntaxError(path, current_line, "empty scenario");
    };

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        auto nl = source.find('\n', pos);
        auto raw = source.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? source.size() + 1 : nl + 1;
        ++line_no;

        auto line = text::trim(text::straighten_quotes(raw));
        if (line.empty() || line[0] == '#') continue;

        if (story.title.empty()) {
            std::string title = line;
            for (std::string_view prefix : {"User Story:", "Story:"}) {
                if (text::starts_with_icase(title, prefix)) {
                    title = text::trim(std::string_view(title).substr(prefix.size()));
                    break;
                }
            }
            if (title.empty()) throw SyntaxError(path, line_no, "empty story title");
            story.title = title;
            continue;
        }

        if (auto title = scenario_title(line)) {
            close_narrative();
            close_scenario();
            section = Section::Scenarios;
            story.scenarios.push_back(Scenario{*title, {}});
            current = &story.scenarios.back();
            current_line = line_no;
            last_primary.reset();
            if (title->empty()) throw SyntaxError(path, line_no, "scenario without a title");
            continue;
        }

        if (auto step = split_keyword(line)) {
            if (!current) throw SyntaxError(path, line_no, "step before any 'Scenario:' header");
            auto [kw, body] = *step;
            Step s;
            s.raw_keyword = kw;
            s.line_number = line_no;
            if (is_continuation(kw)) {
                if (!last_primary) throw SyntaxError(path, line_no, "continuation step with no preceding step");
                s.resolved_keyword = *last_primary;
            } else {
                s.resolved_keyword = kw;
                last_primary = kw;
            }
            auto args = extract_quoted(body);
            if (!args) throw SyntaxError(path, line_no, "unterminated quote");
            if (body.empty()) throw SyntaxError(path, line_no, "step without text");
            s.text = std::move(body);
            s.args = std::move(*args);
            current->steps.push_back(std::move(s));
            continue;
        }

        if (section == Section::Scenarios) throw SyntaxError(path, line_no, "unexpected line inside scenario: " + line);

        if (text::starts_with_icase(line, "Narrative:")) {
            section = Section::Narrative;
            narrative_line = line_no;
            narrative_body = line.substr(std::string_view("Narrative:").size());
            continue;
        }
        if (section == Section::Narrative) {
            if (text::starts_with_icase(line, "Acceptance Criteria")) {
                close_narrative();
                section = Section::Preamble;
            } else {
                narrative_body += " " + line;
            }
            continue;
        }
        // Free description text and the "Acceptance Criteria:" banner are ignored.
    }

    close_narrative();
    close_scenario();
    if (story.title.empty()) throw SyntaxError(path, 1, "empty story");
    if (story.scenarios.empty()) throw SyntaxError(path, line_no, "empty story: no scenarios");
    return story;
}

Story load_story(const std::string& path) { return parse_story(read_file(path), path); }

std::string to_story_text(const Story& story) {
    std::ostringstream out;
    out << story.title << "\n";
    if (story.narrative) {
        out << "\nNarrative:\n";
        out << "As a " << story.narrative->role << "\n";
        out << "I want " << story.narrative->feature << "\n";
        out << "So that " << story.narrative->benefit << "\n";
    }
    for (const auto& sc : story.scenarios) {
        out << "\nScenario: " << sc.title << "\n";
        for (const auto& st : sc.steps) out << keyword_name(st.raw_keyword) << " " << st.text << "\n";
    }
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace bac
