#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hemeroteca::lingpipe {

enum class PosTag { NNP, NNS, NN, MD, VB, JJ, CD, DT, IN, GPE, PERSON, ORG, DATE, OTHER };

std::string_view tag_name(PosTag t) noexcept;
std::optional<PosTag> parse_tag(std::string_view s) noexcept;

struct Token {
    std::string surface;
    std::string normalized;
    std::uint32_t sentence_index = 0;
    std::uint32_t position = 0;  // within the sentence, consecutive from 0
    bool punct = false;

    friend bool operator==(const Token&, const Token&) = default;
};

/// Splits raw text into sentences at . ! ? ; followed by whitespace and a
/// capital letter (optionally behind opening quotes or marks). Known
/// abbreviations ("Sr.", "Dr.", ...) and single-letter initials never end a
/// sentence. Sentences are trimmed substrings of the input.
std::vector<std::string> segment_sentences(std::string_view raw_text);

/// Word and punctuation tokens of one sentence, normalized like the index.
std::vector<Token> tokenize(std::string_view sentence, std::uint32_t sentence_index = 0);

/// Term -> tag table plus suffix rules.
///
/// File format: `term<TAB>TAG` per line; a term starting with '-' declares a
/// suffix rule ("-mente<TAB>OTHER"). '#' starts a comment line.
class TagLexicon {
public:
    static TagLexicon load(const std::string& path);
    static TagLexicon parse(std::istream& in);

    void add(std::string_view term, PosTag tag);
    void add_suffix(std::string_view suffix, PosTag tag);
    /// Exact normalized form first, then the accent-free key.
    std::optional<PosTag> lookup(std::string_view normalized) const;
    /// Longest matching suffix rule.
    std::optional<PosTag> suffix_tag(std::string_view normalized) const;
    std::size_t size() const { return terms_.size(); }

private:
    std::map<std::string, PosTag, std::less<>> terms_;
    std::map<std::string, PosTag, std::less<>> shadow_;
    std::vector<std::pair<std::string, PosTag>> suffixes_;  // longest first
};

enum class TagSource { Lexicon, Punctuation, Numeral, Capitalization, Plural, Suffix, Default };
std::string_view source_name(TagSource s) noexcept;

struct TaggedToken {
    Token token;
    PosTag tag = PosTag::NN;
    TagSource source = TagSource::Default;

    friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

/// Tags one sentence. Precedence: punctuation, lexicon, numerals,
/// capitalized unknown words after the first word (NNP), plurals of known
/// nouns (NNS), suffix rules, and NN by default.
std::vector<TaggedToken> pos_tag(const std::vector<Token>& tokens, const TagLexicon& lexicon);

}  // namespace hemeroteca::lingpipe
