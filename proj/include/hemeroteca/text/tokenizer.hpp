#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hemeroteca::text {

enum class TokenKind { Word, Punct };

struct RawToken {
    std::string surface;
    TokenKind kind = TokenKind::Word;
    std::size_t offset = 0;  // byte offset of the first code point in the input
};

/// Splits text into word and punctuation tokens. Whitespace separates tokens
/// and is dropped; every non-alphanumeric code point is its own token.
/// A word broken by a hyphen at a line end ("tormen-\nta") is rejoined into
/// one word and soft hyphens inside words are removed.
std::vector<RawToken> scan_tokens(std::string_view text);

/// Normalized forms of the word tokens only, in order.
std::vector<std::string> normalized_words(std::string_view text);

}  // namespace hemeroteca::text
