#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace hemeroteca {

enum class DatePrecision { Year, Month, Day };

/// A calendar date that may be known only to the year or month, as is usual
/// for historical newspaper metadata.
class PartialDate {
public:
    PartialDate() = default;
    /// Throws Error(ValidationFailed) on calendar-invalid combinations.
    explicit PartialDate(int year, std::optional<int> month = {}, std::optional<int> day = {});

    /// Accepts YYYY, YYYY-MM or YYYY-MM-DD.
    static PartialDate parse(std::string_view text);
    static std::optional<PartialDate> try_parse(std::string_view text) noexcept;

    int year() const noexcept { return year_; }
    std::optional<int> month() const noexcept { return month_; }
    std::optional<int> day() const noexcept { return day_; }
    DatePrecision precision() const noexcept;

    /// Day ordinals (days since 1970-01-01) of the first and last day covered.
    long first_day() const noexcept;
    long last_day() const noexcept;

    std::string to_string() const;

    friend bool operator==(const PartialDate&, const PartialDate&) = default;
    /// Chronological by first covered day, coarser precision first on ties.
    friend std::strong_ordering operator<=>(const PartialDate& a, const PartialDate& b) noexcept;

private:
    int year_ = 0;
    std::optional<int> month_;
    std::optional<int> day_;
};

/// Closed interval of partial dates, compared through their covered days.
struct DateRange {
    PartialDate start;
    PartialDate end;

    static DateRange of(const PartialDate& d) { return {d, d}; }
    static DateRange years(int first, int last);

    long first_day() const noexcept { return start.first_day(); }
    long last_day() const noexcept { return end.last_day(); }
    bool intersects(const DateRange& other) const noexcept {
        return first_day() <= other.last_day() && other.first_day() <= last_day();
    }
    bool contains(const PartialDate& d) const noexcept {
        return first_day() <= d.first_day() && d.last_day() <= last_day();
    }
    std::string to_string() const;

    friend bool operator==(const DateRange&, const DateRange&) = default;
};

/// Parses analyst-facing date expressions: ISO partial dates, year ranges
/// ("1800-1810", "1800..1810"), century notation ("XIX c.", "siglo XIX") and
/// Spanish phrases ("12 de enero de 1805", "junio de 1805").
std::optional<DateRange> parse_date_expression(std::string_view text);

/// 1-based month from a Spanish month name (accents and case ignored).
std::optional<int> spanish_month(std::string_view word);

/// Year range covered by a century given in Roman numerals: XIX -> 1801..1900.
std::optional<DateRange> century_range(std::string_view roman);

}  // namespace hemeroteca
