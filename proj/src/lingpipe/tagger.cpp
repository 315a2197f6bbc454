#include "hemeroteca/lingpipe/tagger.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/text/normalize.hpp"
#include "hemeroteca/text/tokenizer.hpp"

namespace hemeroteca::lingpipe {

namespace {

constexpr std::array<std::string_view, 14> kTagNames{"NNP", "NNS", "NN", "MD",     "VB",  "JJ",   "CD",
                                                     "DT",  "IN",  "GPE", "PERSON", "ORG", "DATE", "OTHER"};

const std::set<std::string, std::less<>>& abbreviations() {
    static const std::set<std::string, std::less<>> list{
        "sr", "sra", "srta", "sres", "dr", "dra", "dn", "gral", "cnel", "tte", "cap", "capt", "gob",
        "pbro", "fr", "sto", "sta", "ud", "uds", "vd", "vds", "etc", "pág", "pag", "núm", "num", "art",
        "prov", "depto", "dpto", "av", "ntra", "ilmo", "excmo", "lic", "ing", "mons", "hno", "cía", "cia"};
    return list;
}

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool starts_with_any(std::string_view s, std::initializer_list<std::string_view> prefixes, std::size_t& len) {
    for (auto p : prefixes) {
        if (s.starts_with(p)) {
            len = p.size();
            return true;
        }
    }
    return false;
}

// Raw word immediately before byte `dot`, back to whitespace or punctuation.
std::string_view word_before(std::string_view text, std::size_t dot) {
    std::size_t b = dot;
    while (b > 0 && !is_space(static_cast<unsigned char>(text[b - 1])) && text[b - 1] != '(' && text[b - 1] != '"' &&
           text[b - 1] != '.')
        --b;
    return text.substr(b, dot - b);
}

bool guarded(std::string_view text, std::size_t dot) {
    const auto raw = word_before(text, dot);
    if (raw.empty()) return false;
    const auto w = text::normalize(raw);
    if (abbreviations().contains(w)) return true;
    // Single-letter initials ("J. Pérez").
    return text::strip_accents(w).size() == 1 && text::is_capitalized(raw);
}

}  // namespace

std::string_view tag_name(PosTag t) noexcept { return kTagNames[static_cast<std::size_t>(t)]; }

std::optional<PosTag> parse_tag(std::string_view s) noexcept {
    for (std::size_t i = 0; i < kTagNames.size(); ++i)
        if (kTagNames[i] == s) return static_cast<PosTag>(i);
    return std::nullopt;
}

std::string_view source_name(TagSource s) noexcept {
    switch (s) {
        case TagSource::Lexicon: return "lexicon";
        case TagSource::Punctuation: return "punctuation";
        case TagSource::Numeral: return "numeral";
        case TagSource::Capitalization: return "capitalization";
        case TagSource::Plural: return "plural";
        case TagSource::Suffix: return "suffix";
        case TagSource::Default: return "default";
    }
    return "default";
}

std::vector<std::string> segment_sentences(std::string_view raw) {
    std::vector<std::string> out;
    std::size_t start = 0;
    auto emit = [&](std::size_t end) {
        auto s = text::trim(raw.substr(start, end - start));
        if (!s.empty()) out.push_back(std::move(s));
        start = end;
    };
    std::size_t i = 0;
    while (i < raw.size()) {
        const char c = raw[i];
        if (c != '.' && c != '!' && c != '?' && c != ';') {
            ++i;
            continue;
        }
        const std::size_t term_pos = i;
        std::size_t j = i;
        // Terminator run plus closing quotes and brackets.
        for (;;) {
            std::size_t len = 0;
            if (j < raw.size() && (raw[j] == '.' || raw[j] == '!' || raw[j] == '?' || raw[j] == ';' || raw[j] == ')' ||
                                   raw[j] == '"' || raw[j] == '\'')) {
                ++j;
            } else if (starts_with_any(raw.substr(j), {"»", "”", "’"}, len)) {
                j += len;
            } else {
                break;
            }
        }
        const std::size_t end = j;
        if (j >= raw.size() || !is_space(static_cast<unsigned char>(raw[j]))) {
            i = std::max(j, i + 1);
            continue;
        }
        while (j < raw.size() && is_space(static_cast<unsigned char>(raw[j]))) ++j;
        for (std::size_t len = 0; starts_with_any(raw.substr(j), {"¿", "¡", "«", "“", "\"", "(", "—", "-"}, len);) j += len;
        const bool capital = j < raw.size() && text::is_capitalized(raw.substr(j, 4));
        if (capital && !(c == '.' && guarded(raw, term_pos))) emit(end);
        i = std::max(end, i + 1);
    }
    emit(raw.size());
    return out;
}

std::vector<Token> tokenize(std::string_view sentence, std::uint32_t sentence_index) {
    std::vector<Token> out;
    std::uint32_t pos = 0;
    for (auto& raw : text::scan_tokens(sentence)) {
        Token t;
        t.punct = raw.kind == text::TokenKind::Punct;
        t.normalized = t.punct ? raw.surface : text::normalize(raw.surface);
        t.surface = std::move(raw.surface);
        t.sentence_index = sentence_index;
        t.position = pos++;
        out.push_back(std::move(t));
    }
    return out;
}

TagLexicon TagLexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw not_found("tag lexicon " + path);
    return parse(in);
}

TagLexicon TagLexicon::parse(std::istream& in) {
    TagLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = text::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto tab = t.find('\t');
        const auto tag = tab == std::string::npos ? std::nullopt : parse_tag(text::trim(std::string_view(t).substr(tab + 1)));
        if (!tag)
            throw Error(ErrorCode::ValidationFailed, "lexicon line " + std::to_string(line_no) + ": expected term<TAB>TAG");
        const auto term = text::trim(std::string_view(t).substr(0, tab));
        if (term.size() > 1 && term[0] == '-') lex.add_suffix(std::string_view(term).substr(1), *tag);
        else lex.add(term, *tag);
    }
    return lex;
}

void TagLexicon::add(std::string_view term, PosTag tag) {
    const auto n = text::normalize(term);
    terms_.insert_or_assign(n, tag);
    shadow_.try_emplace(text::strip_accents(n), tag);
}

void TagLexicon::add_suffix(std::string_view suffix, PosTag tag) {
    const auto n = text::normalize(suffix);
    std::erase_if(suffixes_, [&](const auto& s) { return s.first == n; });
    suffixes_.emplace_back(n, tag);
    std::stable_sort(suffixes_.begin(), suffixes_.end(),
                     [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
}

std::optional<PosTag> TagLexicon::lookup(std::string_view normalized) const {
    if (auto it = terms_.find(normalized); it != terms_.end()) return it->second;
    if (auto it = shadow_.find(text::strip_accents(normalized)); it != shadow_.end()) return it->second;
    return std::nullopt;
}

std::optional<PosTag> TagLexicon::suffix_tag(std::string_view normalized) const {
    for (const auto& [suffix, tag] : suffixes_)
        if (normalized.size() > suffix.size() && normalized.ends_with(suffix)) return tag;
    return std::nullopt;
}

namespace {

bool known_noun(const TagLexicon& lex, const std::string& stem) {
    const auto t = lex.lookup(stem);
    return t && (*t == PosTag::NN || *t == PosTag::JJ);
}

std::optional<PosTag> plural_tag(const TagLexicon& lex, const std::string& w) {
    if (w.size() > 3 && w.ends_with("ces") && known_noun(lex, w.substr(0, w.size() - 3) + "z")) return PosTag::NNS;
    if (w.size() > 3 && w.ends_with("es") && known_noun(lex, w.substr(0, w.size() - 2))) return PosTag::NNS;
    if (w.size() > 2 && w.ends_with("s") && known_noun(lex, w.substr(0, w.size() - 1))) return PosTag::NNS;
    return std::nullopt;
}

}  // namespace

std::vector<TaggedToken> pos_tag(const std::vector<Token>& tokens, const TagLexicon& lexicon) {
    std::vector<TaggedToken> out;
    out.reserve(tokens.size());
    bool seen_word = false;
    for (const auto& tok : tokens) {
        TaggedToken t{tok, PosTag::NN, TagSource::Default};
        const bool initial = !seen_word;
        if (tok.punct) {
            t.tag = PosTag::OTHER;
            t.source = TagSource::Punctuation;
        } else if (auto hit = lexicon.lookup(tok.normalized)) {
            t.tag = *hit;
            t.source = TagSource::Lexicon;
        } else if (text::is_numeral(tok.surface)) {
            t.tag = PosTag::CD;
            t.source = TagSource::Numeral;
        } else if (!initial && text::is_capitalized(tok.surface)) {
            t.tag = PosTag::NNP;
            t.source = TagSource::Capitalization;
        } else if (auto pl = plural_tag(lexicon, tok.normalized)) {
            t.tag = *pl;
            t.source = TagSource::Plural;
        } else if (auto sx = lexicon.suffix_tag(tok.normalized)) {
            t.tag = *sx;
            t.source = TagSource::Suffix;
        }
        if (!tok.punct) seen_word = true;
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace hemeroteca::lingpipe
