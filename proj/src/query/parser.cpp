#include "hemeroteca/query/parser.hpp"

#include <charconv>
#include <vector>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/text/normalize.hpp"

namespace hemeroteca::query {

namespace {

enum class Tok { LParen, RParen, Word, Phrase, Bracket, And, Or };

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Reads a double-quoted string starting at text[i] == '"'; handles \" and \\.
std::string read_quoted(std::string_view text, std::size_t& i) {
    const std::size_t open = i++;
    std::string out;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\\' && i + 1 < text.size()) {
            out.push_back(text[i + 1]);
            i += 2;
            continue;
        }
        if (c == '"') {
            ++i;
            return out;
        }
        out.push_back(c);
        ++i;
    }
    throw ParseError("unterminated quote", open);
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (is_space(c)) {
            ++i;
        } else if (c == '(' || c == ')') {
            out.push_back({c == '(' ? Tok::LParen : Tok::RParen, std::string(1, c), i});
            ++i;
        } else if (c == '"') {
            const auto start = i;
            out.push_back({Tok::Phrase, read_quoted(text, i), start});
        } else if (c == '[') {
            const auto start = i;
            const auto close = text.find(']', i);
            if (close == std::string_view::npos) throw ParseError("unterminated constraint", start);
            out.push_back({Tok::Bracket, std::string(text.substr(i + 1, close - i - 1)), start});
            i = close + 1;
        } else if (c == ']') {
            throw ParseError("unexpected ']'", i);
        } else {
            const auto start = i;
            while (i < text.size() && !is_space(text[i]) && text[i] != '(' && text[i] != ')' && text[i] != '"' &&
                   text[i] != '[' && text[i] != ']')
                ++i;
            std::string word(text.substr(start, i - start));
            const auto key = text::normalize(word);
            if (key == "and" || key == "y")
                out.push_back({Tok::And, word, start});
            else if (key == "or" || key == "o")
                out.push_back({Tok::Or, word, start});
            else
                out.push_back({Tok::Word, word, start});
        }
    }
    return out;
}

void check_parentheses(const std::vector<Token>& toks) {
    std::vector<std::size_t> open;
    for (const auto& t : toks) {
        if (t.kind == Tok::LParen) open.push_back(t.offset);
        if (t.kind == Tok::RParen) {
            if (open.empty()) throw ParseError("unbalanced ')'", t.offset);
            open.pop_back();
        }
    }
    if (!open.empty()) throw ParseError("unbalanced '('", open.front());
}

std::optional<double> to_number(const std::string& s) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

// Splits constraint body on whitespace, keeping quoted strings whole.
std::vector<std::pair<std::string, bool>> split_constraint(std::string_view body, std::size_t base) {
    std::vector<std::pair<std::string, bool>> parts;
    std::size_t i = 0;
    while (i < body.size()) {
        if (is_space(body[i])) {
            ++i;
        } else if (body[i] == '"') {
            try {
                parts.emplace_back(read_quoted(body, i), true);
            } catch (const ParseError&) {
                throw ParseError("unterminated quote", base + 1 + i);
            }
        } else {
            const auto start = i;
            while (i < body.size() && !is_space(body[i])) ++i;
            parts.emplace_back(std::string(body.substr(start, i - start)), false);
        }
    }
    return parts;
}

Constraint parse_constraint(const Token& tok) {
    auto fail = [&](const std::string& why) -> ParseError { return ParseError(why, tok.offset); };
    const auto parts = split_constraint(tok.text, tok.offset);
    if (parts.size() < 3) throw fail("constraint needs attribute, comparator and value");
    Constraint c;
    const auto attr = parse_attribute(parts[0].first);
    if (!attr) throw fail("unknown constraint attribute '" + parts[0].first + "'");
    const auto op = parse_comparator(parts[1].first);
    if (!op) throw fail("unknown comparator '" + parts[1].first + "'");
    c.attribute = *attr;
    c.op = *op;
    std::size_t i = 2;
    if (c.op == Comparator::Between) {
        if (parts.size() < 4) throw fail("'between' needs two numbers");
        const auto lo = to_number(parts[2].first);
        const auto hi = to_number(parts[3].first);
        if (!lo || !hi || *lo > *hi) throw fail("'between' needs two ordered numbers");
        c.value = *lo;
        c.upper = *hi;
        i = 4;
    } else if (auto v = to_number(parts[2].first); v && c.op != Comparator::OneOf) {
        c.value = *v;
        i = 3;
    } else if (c.op == Comparator::OneOf || c.op == Comparator::Equal) {
        std::size_t start = 0;
        const auto& s = parts[2].first;
        while (true) {
            const auto bar = s.find('|', start);
            auto label = s.substr(start, bar == std::string::npos ? bar : bar - start);
            if (label.empty()) throw fail("empty label");
            c.labels.push_back(label);
            if (bar == std::string::npos) break;
            start = bar + 1;
        }
        i = 3;
    } else {
        throw fail("comparator '" + parts[1].first + "' needs a number");
    }
    if (i < parts.size() && parts[i].first != "@") c.unit = parts[i++].first;
    if (i < parts.size()) {
        if (parts[i].first != "@" || parts.size() != i + 4 || !parts[i + 1].second)
            throw fail("anchor must be @ \"place\" lat lon");
        const auto lat = to_number(parts[i + 2].first);
        const auto lon = to_number(parts[i + 3].first);
        if (!lat || !lon || *lat < -90 || *lat > 90 || *lon < -180 || *lon > 180) throw fail("bad anchor coordinates");
        c.anchor = GeoAnchor{parts[i + 1].first, *lat, *lon};
    }
    return c;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    QueryExpr parse() {
        auto q = parse_or();
        if (pos_ < toks_.size()) throw ParseError("unexpected token '" + toks_[pos_].text + "'", toks_[pos_].offset);
        return q;
    }

private:
    bool at(Tok k) const { return pos_ < toks_.size() && toks_[pos_].kind == k; }

    bool starts_primary() const {
        return at(Tok::LParen) || at(Tok::Word) || at(Tok::Phrase) || at(Tok::Bracket);
    }

    QueryExpr parse_or() {
        std::vector<QueryExpr> parts{parse_and()};
        while (at(Tok::Or)) {
            const auto& op = toks_[pos_++];
            if (!starts_primary()) throw ParseError("dangling operator '" + op.text + "'", op.offset);
            parts.push_back(parse_and());
        }
        return parts.size() == 1 ? std::move(parts.front()) : QueryExpr::any_of(std::move(parts));
    }

    QueryExpr parse_and() {
        std::vector<QueryExpr> parts{parse_primary()};
        while (true) {
            if (at(Tok::And)) {
                const auto& op = toks_[pos_++];
                if (!starts_primary()) throw ParseError("dangling operator '" + op.text + "'", op.offset);
                parts.push_back(parse_primary());
            } else if (starts_primary()) {
                parts.push_back(parse_primary());
            } else {
                break;
            }
        }
        return parts.size() == 1 ? std::move(parts.front()) : QueryExpr::all_of(std::move(parts));
    }

    QueryExpr parse_primary() {
        if (pos_ >= toks_.size()) throw ParseError("unexpected end of query", end_offset());
        const auto& t = toks_[pos_];
        switch (t.kind) {
            case Tok::LParen: {
                ++pos_;
                if (at(Tok::RParen)) throw ParseError("empty parentheses", t.offset);
                auto inner = parse_or();
                if (!at(Tok::RParen)) throw ParseError("unbalanced '('", t.offset);
                ++pos_;
                return inner;
            }
            case Tok::Word:
            case Tok::Phrase: {
                ++pos_;
                auto words = text::phrase_words(t.text);
                if (words.empty()) throw ParseError("empty term", t.offset);
                QueryExpr q;
                q.kind = QueryExpr::Kind::Term;
                q.phrase = std::move(words);
                return q;
            }
            case Tok::Bracket:
                ++pos_;
                return QueryExpr::with(parse_constraint(t));
            case Tok::And:
            case Tok::Or:
                throw ParseError("dangling operator '" + t.text + "'", t.offset);
            case Tok::RParen:
                throw ParseError("unexpected ')'", t.offset);
        }
        throw ParseError("unexpected token", t.offset);
    }

    std::size_t end_offset() const {
        return toks_.empty() ? 0 : toks_.back().offset + toks_.back().text.size();
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

QueryExpr parse_query(std::string_view text) {
    auto toks = lex(text);
    // Punctuation-only words ("," or "-") carry no term; drop them.
    std::erase_if(toks, [](const Token& t) { return t.kind == Tok::Word && text::phrase_words(t.text).empty(); });
    if (toks.empty()) throw ParseError("empty query", 0);
    check_parentheses(toks);
    return canonicalize(Parser(std::move(toks)).parse());
}

}  // namespace hemeroteca::query
