#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/common/fileio.hpp"
#include "hemeroteca/common/partial_date.hpp"
#include "testkit.hpp"

namespace hemeroteca {
namespace {

long civil_days(int y, int m, int d) {
    using namespace std::chrono;
    return sys_days{year{y} / month{static_cast<unsigned>(m)} / day{static_cast<unsigned>(d)}}.time_since_epoch().count();
}

TEST(PartialDate, ParsesEveryPrecision) {
    EXPECT_EQ(PartialDate::parse("1805").precision(), DatePrecision::Year);
    EXPECT_EQ(PartialDate::parse("1805-01").precision(), DatePrecision::Month);
    const auto d = PartialDate::parse("1805-01-12");
    EXPECT_EQ(d.precision(), DatePrecision::Day);
    EXPECT_EQ(d.year(), 1805);
    EXPECT_EQ(d.month(), 1);
    EXPECT_EQ(d.day(), 12);
    EXPECT_EQ(d.to_string(), "1805-01-12");
}

TEST(PartialDate, RejectsCalendarInvalidDates) {
    EXPECT_FALSE(PartialDate::try_parse("1809-02-30"));
    EXPECT_FALSE(PartialDate::try_parse("1900-02-29"));
    EXPECT_TRUE(PartialDate::try_parse("1896-02-29"));
    EXPECT_FALSE(PartialDate::try_parse("1805-13"));
    EXPECT_FALSE(PartialDate::try_parse("18o5"));
    EXPECT_THROW(PartialDate(1805, 4, 31), Error);
}

TEST(PartialDate, CoveredDaysMatchTheCivilCalendar) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> y(1500, 2000), m(1, 12), d(1, 28);
    for (int i = 0; i < 500; ++i) {
        const int yy = y(rng), mm = m(rng), dd = d(rng);
        EXPECT_EQ(PartialDate(yy, mm, dd).first_day(), civil_days(yy, mm, dd));
        EXPECT_EQ(PartialDate(yy).first_day(), civil_days(yy, 1, 1));
        EXPECT_EQ(PartialDate(yy).last_day(), civil_days(yy, 12, 31));
        EXPECT_EQ(PartialDate(yy, mm).last_day() + 1, mm == 12 ? civil_days(yy + 1, 1, 1) : civil_days(yy, mm + 1, 1));
    }
}

TEST(PartialDate, OrdersChronologicallyCoarserFirst) {
    EXPECT_LT(PartialDate(1805), PartialDate(1805, 1));
    EXPECT_LT(PartialDate(1805, 1), PartialDate(1805, 1, 1));
    EXPECT_LT(PartialDate(1805, 1, 31), PartialDate(1805, 2));
    EXPECT_LT(PartialDate(1804, 12, 31), PartialDate(1805));
}

TEST(DateExpression, YearRanges) {
    EXPECT_EQ(parse_date_expression("1800-1810"), DateRange::years(1800, 1810));
    EXPECT_EQ(parse_date_expression("1800..1810"), DateRange::years(1800, 1810));
}

TEST(DateExpression, CenturyNotation) {
    EXPECT_EQ(parse_date_expression("siglo XIX"), DateRange::years(1801, 1900));
    EXPECT_EQ(parse_date_expression("XIX c."), DateRange::years(1801, 1900));
    EXPECT_EQ(century_range("XVIII"), DateRange::years(1701, 1800));
}

TEST(DateExpression, SpanishPhrases) {
    EXPECT_EQ(parse_date_expression("12 de enero de 1805"), DateRange::of(PartialDate(1805, 1, 12)));
    EXPECT_EQ(parse_date_expression("junio de 1805"), DateRange::of(PartialDate(1805, 6)));
    EXPECT_EQ(spanish_month("Septiembre"), 9);
    EXPECT_EQ(spanish_month("setiembre"), 9);
    EXPECT_FALSE(parse_date_expression("ayer por la tarde"));
}

TEST(DateRange, IntersectionAndContainment) {
    const auto r = DateRange::years(1800, 1810);
    EXPECT_TRUE(r.contains(PartialDate(1810, 12, 31)));
    EXPECT_FALSE(r.contains(PartialDate(1811)));
    EXPECT_TRUE(r.intersects(DateRange::of(PartialDate(1810))));
    EXPECT_FALSE(r.intersects(DateRange::years(1811, 1812)));
}

TEST(ErrorCodes, WireNamesAreStable) {
    EXPECT_EQ(code_name(ErrorCode::NotFound), "not_found");
    EXPECT_EQ(code_name(ErrorCode::ValidationFailed), "validation_failed");
    EXPECT_EQ(code_name(ErrorCode::Conflict), "conflict");
    EXPECT_EQ(code_name(ErrorCode::VersionConflict), "version_conflict");
    EXPECT_EQ(code_name(ErrorCode::ParseError), "parse_error");
    EXPECT_EQ(code_name(ErrorCode::BadRequest), "bad_request");
    EXPECT_EQ(code_name(ErrorCode::Unauthorized), "unauthorized");
    EXPECT_EQ(code_name(ErrorCode::Internal), "internal");
}

TEST(FileIo, AppendAndReadLines) {
    testkit::TempDir dir;
    const auto f = dir.path() / "log";
    EXPECT_TRUE(read_lines(f).empty());
    append_line(f, "one");
    append_line(f, "two");
    EXPECT_EQ(read_lines(f), (std::vector<std::string>{"one", "two"}));
    write_atomically(f, "three\n\n");
    EXPECT_EQ(read_lines(f), (std::vector<std::string>{"three"}));
}

}  // namespace
}  // namespace hemeroteca
