#include "hemeroteca/common/partial_date.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/text/normalize.hpp"
#include "hemeroteca/text/tokenizer.hpp"

namespace hemeroteca {

namespace {

namespace chr = std::chrono;

long ordinal(int y, unsigned m, unsigned d) {
    const chr::year_month_day ymd{chr::year{y}, chr::month{m}, chr::day{d}};
    return static_cast<long>(chr::sys_days{ymd}.time_since_epoch().count());
}

unsigned last_day_of(int y, unsigned m) {
    const chr::year_month_day_last ymdl{chr::year{y}, chr::month_day_last{chr::month{m}}};
    return static_cast<unsigned>(ymdl.day());
}

std::optional<int> to_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<int> roman_value(std::string_view roman) {
    int total = 0;
    int prev = 0;
    for (auto it = roman.rbegin(); it != roman.rend(); ++it) {
        int v = 0;
        switch (*it) {
            case 'I': case 'i': v = 1; break;
            case 'V': case 'v': v = 5; break;
            case 'X': case 'x': v = 10; break;
            case 'L': case 'l': v = 50; break;
            case 'C': case 'c': v = 100; break;
            default: return std::nullopt;
        }
        total += v < prev ? -v : v;
        prev = std::max(prev, v);
    }
    if (total <= 0 || total > 30) return std::nullopt;
    return total;
}

}  // namespace

PartialDate::PartialDate(int year, std::optional<int> month, std::optional<int> day)
    : year_(year), month_(month), day_(day) {
    if (day_ && !month_) throw Error(ErrorCode::ValidationFailed, "day given without month");
    if (month_ && (*month_ < 1 || *month_ > 12))
        throw Error(ErrorCode::ValidationFailed, "month out of range: " + std::to_string(*month_));
    if (day_) {
        const chr::year_month_day ymd{chr::year{year_}, chr::month{static_cast<unsigned>(*month_)},
                                      chr::day{static_cast<unsigned>(*day_)}};
        if (*day_ < 1 || !ymd.ok())
            throw Error(ErrorCode::ValidationFailed, "invalid calendar date: " + to_string());
    }
}

PartialDate PartialDate::parse(std::string_view text) {
    auto parsed = try_parse(text);
    if (!parsed) throw Error(ErrorCode::ValidationFailed, "invalid date: " + std::string(text));
    return *parsed;
}

std::optional<PartialDate> PartialDate::try_parse(std::string_view text) noexcept {
    std::array<std::string_view, 3> parts{};
    std::size_t n = 0;
    std::size_t start = 0;
    while (true) {
        const auto dash = text.find('-', start);
        if (n == parts.size()) return std::nullopt;
        parts[n++] = text.substr(start, dash == std::string_view::npos ? dash : dash - start);
        if (dash == std::string_view::npos) break;
        start = dash + 1;
    }
    if (parts[0].size() != 4) return std::nullopt;
    if (n >= 2 && parts[1].size() != 2) return std::nullopt;
    if (n == 3 && parts[2].size() != 2) return std::nullopt;
    const auto y = to_int(parts[0]);
    if (!y) return std::nullopt;
    std::optional<int> m;
    std::optional<int> d;
    if (n >= 2) {
        m = to_int(parts[1]);
        if (!m) return std::nullopt;
    }
    if (n == 3) {
        d = to_int(parts[2]);
        if (!d) return std::nullopt;
    }
    try {
        return PartialDate(*y, m, d);
    } catch (const Error&) {
        return std::nullopt;
    }
}

DatePrecision PartialDate::precision() const noexcept {
    if (day_) return DatePrecision::Day;
    if (month_) return DatePrecision::Month;
    return DatePrecision::Year;
}

long PartialDate::first_day() const noexcept {
    return ordinal(year_, static_cast<unsigned>(month_.value_or(1)), static_cast<unsigned>(day_.value_or(1)));
}

long PartialDate::last_day() const noexcept {
    const unsigned m = static_cast<unsigned>(month_.value_or(12));
    const unsigned d = day_ ? static_cast<unsigned>(*day_) : last_day_of(year_, m);
    return ordinal(year_, m, d);
}

std::string PartialDate::to_string() const {
    char buf[32];
    if (day_)
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year_, *month_, *day_);
    else if (month_)
        std::snprintf(buf, sizeof buf, "%04d-%02d", year_, *month_);
    else
        std::snprintf(buf, sizeof buf, "%04d", year_);
    return buf;
}

std::strong_ordering operator<=>(const PartialDate& a, const PartialDate& b) noexcept {
    if (auto c = a.first_day() <=> b.first_day(); c != 0) return c;
    if (auto c = static_cast<int>(a.precision()) <=> static_cast<int>(b.precision()); c != 0) return c;
    return a.last_day() <=> b.last_day();
}

DateRange DateRange::years(int first, int last) {
    return {PartialDate(first), PartialDate(last)};
}

std::string DateRange::to_string() const {
    if (start == end) return start.to_string();
    return start.to_string() + ".." + end.to_string();
}

std::optional<int> spanish_month(std::string_view word) {
    static constexpr std::array<std::string_view, 12> names{
        "enero", "febrero", "marzo", "abril", "mayo", "junio",
        "julio", "agosto", "septiembre", "octubre", "noviembre", "diciembre"};
    const auto key = text::shadow_key(word);
    for (std::size_t i = 0; i < names.size(); ++i)
        if (key == names[i]) return static_cast<int>(i + 1);
    if (key == "setiembre") return 9;
    return std::nullopt;
}

std::optional<DateRange> century_range(std::string_view roman) {
    const auto c = roman_value(roman);
    if (!c) return std::nullopt;
    return DateRange::years((*c - 1) * 100 + 1, *c * 100);
}

std::optional<DateRange> parse_date_expression(std::string_view raw) {
    const std::string trimmed = text::trim(raw);
    std::string_view s = trimmed;
    if (s.empty()) return std::nullopt;

    if (auto d = PartialDate::try_parse(s)) return DateRange::of(*d);

    for (std::string_view sep : {"..", "/"}) {
        if (auto pos = s.find(sep); pos != std::string_view::npos) {
            auto a = parse_date_expression(s.substr(0, pos));
            auto b = parse_date_expression(s.substr(pos + sep.size()));
            if (a && b && a->first_day() <= b->last_day()) return DateRange{a->start, b->end};
            return std::nullopt;
        }
    }
    // "1800-1810": two bare years joined by a dash.
    if (s.size() == 9 && s[4] == '-') {
        auto a = to_int(s.substr(0, 4));
        auto b = to_int(s.substr(5));
        if (a && b && *a <= *b) return DateRange::years(*a, *b);
    }

    std::vector<std::string> words;
    for (const auto& tok : text::scan_tokens(s))
        if (tok.kind == text::TokenKind::Word) words.push_back(tok.surface);
    if (words.empty()) return std::nullopt;

    // Century notation: "XIX c.", "s. XIX", "siglo XIX".
    if (words.size() == 2) {
        const auto first = text::shadow_key(words[0]);
        const auto second = text::shadow_key(words[1]);
        if (second == "c" || second == "s") return century_range(words[0]);
        if (first == "siglo" || first == "s" || first == "c") return century_range(words[1]);
    }

    // Spanish phrases; connectors "de"/"del" are optional.
    std::vector<std::string> core;
    for (const auto& w : words) {
        const auto k = text::shadow_key(w);
        if (k != "de" && k != "del") core.push_back(w);
    }
    try {
        if (core.size() == 3 && text::is_numeral(core[0]) && text::is_numeral(core[2])) {
            const auto m = spanish_month(core[1]);
            const auto d = to_int(core[0]);
            const auto y = to_int(core[2]);
            if (m && d && y) return DateRange::of(PartialDate(*y, *m, *d));
        }
        if (core.size() == 2 && text::is_numeral(core[1])) {
            const auto m = spanish_month(core[0]);
            const auto y = to_int(core[1]);
            if (m && y) return DateRange::of(PartialDate(*y, *m));
        }
    } catch (const Error&) {
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace hemeroteca
