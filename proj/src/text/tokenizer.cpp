#include "hemeroteca/text/tokenizer.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "hemeroteca/text/normalize.hpp"

namespace hemeroteca::text {

namespace {

constexpr UChar32 kSoftHyphen = 0x00AD;

bool is_word_char(UChar32 c) {
    if (c < 0) return false;
    if (u_isalnum(c)) return true;
    const auto type = u_charType(c);
    return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK;
}

bool is_space(UChar32 c) {
    return c >= 0 && (u_isUWhiteSpace(c) || u_iscntrl(c));
}

bool is_hyphen(UChar32 c) {
    return c == '-' || c == 0x2010 || c == kSoftHyphen;
}

class Cursor {
public:
    explicit Cursor(std::string_view text)
        : bytes_(reinterpret_cast<const uint8_t*>(text.data())),
          len_(static_cast<int32_t>(text.size())) {}

    bool done() const { return pos_ >= len_; }
    int32_t pos() const { return pos_; }
    void seek(int32_t p) { pos_ = p; }

    // Decodes the code point at pos without advancing; returns its byte end.
    UChar32 peek(int32_t& next) const {
        int32_t i = pos_;
        UChar32 c = 0;
        U8_NEXT(bytes_, i, len_, c);
        next = i;
        return c;
    }

    UChar32 peek_at(int32_t at, int32_t& next) const {
        int32_t i = at;
        UChar32 c = 0;
        U8_NEXT(bytes_, i, len_, c);
        next = i;
        return c;
    }

    int32_t length() const { return len_; }

private:
    const uint8_t* bytes_;
    int32_t len_;
    int32_t pos_ = 0;
};

// If a hyphen at `at` is a line-break artifact followed by more word
// characters, returns the offset where the continuation starts.
int32_t hyphen_continuation(const Cursor& cur, UChar32 hyphen, int32_t after_hyphen) {
    int32_t i = after_hyphen;
    bool saw_newline = false;
    while (i < cur.length()) {
        int32_t next = 0;
        UChar32 c = cur.peek_at(i, next);
        if (c == '\n') {
            saw_newline = true;
        } else if (!(c == ' ' || c == '\t' || c == '\r')) {
            if (is_word_char(c) && (saw_newline || (hyphen == kSoftHyphen && i == after_hyphen)))
                return i;
            return -1;
        }
        i = next;
    }
    return -1;
}

}  // namespace

std::vector<RawToken> scan_tokens(std::string_view text) {
    std::vector<RawToken> out;
    Cursor cur(text);
    while (!cur.done()) {
        const int32_t start = cur.pos();
        int32_t next = 0;
        const UChar32 c = cur.peek(next);
        if (c < 0 || is_space(c)) {
            cur.seek(next);
            continue;
        }
        if (!is_word_char(c)) {
            out.push_back({std::string(text.substr(start, next - start)), TokenKind::Punct,
                           static_cast<std::size_t>(start)});
            cur.seek(next);
            continue;
        }
        RawToken tok{{}, TokenKind::Word, static_cast<std::size_t>(start)};
        int32_t run_start = start;
        while (!cur.done()) {
            int32_t after = 0;
            const UChar32 w = cur.peek(after);
            if (is_word_char(w)) {
                cur.seek(after);
                continue;
            }
            if (is_hyphen(w)) {
                const int32_t resume = hyphen_continuation(cur, w, after);
                if (resume >= 0) {
                    tok.surface.append(text.substr(run_start, cur.pos() - run_start));
                    run_start = resume;
                    cur.seek(resume);
                    continue;
                }
            }
            break;
        }
        tok.surface.append(text.substr(run_start, cur.pos() - run_start));
        out.push_back(std::move(tok));
    }
    return out;
}

std::vector<std::string> normalized_words(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& tok : scan_tokens(text)) {
        if (tok.kind == TokenKind::Word) out.push_back(normalize(tok.surface));
    }
    return out;
}

}  // namespace hemeroteca::text
