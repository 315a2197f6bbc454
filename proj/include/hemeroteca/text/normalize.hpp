#pragma once

#include <string>
#include <string_view>
#include <vector>

// Token normalization shared by indexing, tagging, vocabularies and queries.
// Normalized form: Unicode NFC + lowercase, accents kept. Shadow key: the
// normalized form with combining marks removed ("inundación" -> "inundacion").

namespace hemeroteca::text {

std::string nfc(std::string_view utf8);
std::string normalize(std::string_view surface);
std::string strip_accents(std::string_view utf8);
std::string shadow_key(std::string_view surface);

/// Normalizes every word of a phrase and joins them with single spaces.
/// Punctuation inside the phrase is dropped.
std::string normalize_phrase(std::string_view phrase);
std::vector<std::string> phrase_words(std::string_view phrase);

/// True when the first code point is an uppercase letter.
bool is_capitalized(std::string_view utf8);
/// True when every code point is a decimal digit.
bool is_numeral(std::string_view utf8);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string trim(std::string_view s);

}  // namespace hemeroteca::text
