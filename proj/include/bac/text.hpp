#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bac::text {

std::string trim(std::string_view s);

/// Collapses runs of ASCII whitespace into one space and trims both ends.
std::string normalize_ws(std::string_view s);

/// Lowercases ASCII and the Latin-1 supplement letters encoded as UTF-8
/// (so "DÉC" folds to "déc").
std::string fold_case(std::string_view s);

/// Case-folded, whitespace-normalized form used for all name comparisons.
std::string canonical(std::string_view s);

bool same_name(std::string_view a, std::string_view b);

/// Replaces typographic double quotes with '"'.
std::string straighten_quotes(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

bool starts_with_icase(std::string_view s, std::string_view prefix);

std::size_t utf8_length(std::string_view s);

std::size_t edit_distance(std::string_view a, std::string_view b);

/// True when both names consist of the same set of case-folded words.
bool token_set_equal(std::string_view a, std::string_view b);

/// Two names that differ but are close enough to be a naming drift of each
/// other: edit distance <= 2 or the same words in another order.
bool is_near_name(std::string_view a, std::string_view b);

struct DecodeResult {
    std::string text;
    bool had_invalid_escape = false;
};

/// Percent-decoding. Invalid escapes are copied through unchanged.
DecodeResult percent_decode(std::string_view s);

}  // namespace bac::text
