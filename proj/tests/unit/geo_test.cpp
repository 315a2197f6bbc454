#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/geo/gazetteer.hpp"
#include "testkit.hpp"

namespace hemeroteca::geo {
namespace {

// Central angle from the dot product of unit vectors.
double chord_distance_km(GeoPoint a, GeoPoint b) {
    const double r = std::numbers::pi / 180.0;
    auto v = [&](GeoPoint p) {
        return std::array<double, 3>{std::cos(p.lat * r) * std::cos(p.lon * r), std::cos(p.lat * r) * std::sin(p.lon * r),
                                     std::sin(p.lat * r)};
    };
    const auto x = v(a), y = v(b);
    const double cross = std::hypot(x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]);
    const double dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    return kEarthRadiusKm * std::atan2(cross, dot);
}

TEST(Distance, AgreesWithVectorOracle) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
    for (int i = 0; i < 2000; ++i) {
        const GeoPoint a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
        EXPECT_NEAR(distance_km(a, b), chord_distance_km(a, b), 1e-6);
        EXPECT_NEAR(distance_km(a, b), distance_km(b, a), 1e-9);
        EXPECT_EQ(distance_km(a, a), 0.0);
    }
}

TEST(Distance, KnownCityPair) {
    const GeoPoint montevideo{-34.9011, -56.1645}, buenos_aires{-34.6037, -58.3816};
    EXPECT_NEAR(distance_km(montevideo, buenos_aires), 204.9, 1.0);
    EXPECT_NEAR(distance_km({0, 0}, {0, 180}), std::numbers::pi * kEarthRadiusKm, 1e-6);
}

TEST(Centroid, OfSymmetricPoints) {
    const auto c = spherical_centroid({{10, 20}, {-10, 20}});
    ASSERT_TRUE(c);
    EXPECT_NEAR(c->lat, 0, 1e-9);
    EXPECT_NEAR(c->lon, 20, 1e-9);
    EXPECT_FALSE(spherical_centroid({}));
    EXPECT_FALSE(spherical_centroid({{0, 0}, {0, 180}}));
}

class GazetteerTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() { gaz_ = new Gazetteer(Gazetteer::load(testkit::resources_dir() / "gazetteer.tsv")); }
    static void TearDownTestSuite() { delete gaz_; }
    static Gazetteer* gaz_;
};
Gazetteer* GazetteerTest::gaz_ = nullptr;

TEST_F(GazetteerTest, MontevideoIsAmbiguous) {
    const auto c = gaz_->resolve("Montevideo");
    ASSERT_GE(c.size(), 2u);
    std::set<std::string> countries;
    for (const auto& e : c) countries.insert(e.country);
    EXPECT_TRUE(countries.contains("UY"));
    EXPECT_TRUE(countries.contains("US"));
}

TEST_F(GazetteerTest, NewspaperCountryRanksFirst) {
    for (const std::string cc : {"UY", "US"}) {
        const auto ranked = rank_candidates(gaz_->resolve("montevideo"), {cc, {}});
        EXPECT_EQ(ranked.front().country, cc);
    }
}

TEST_F(GazetteerTest, NearbyConfirmedPointsBreakTies) {
    const auto candidates = gaz_->resolve("Santa Clara");
    ASSERT_GE(candidates.size(), 3u);
    const auto near_havana = rank_candidates(candidates, {std::nullopt, {{23.1136, -82.3666}}});
    EXPECT_EQ(near_havana.front().country, "CU");
    const auto near_montevideo = rank_candidates(candidates, {std::nullopt, {{-34.9011, -56.1645}}});
    EXPECT_EQ(near_montevideo.front().country, "UY");
}

TEST_F(GazetteerTest, RankingIsAPermutation) {
    const auto candidates = gaz_->resolve("guadalajara");
    auto ranked = rank_candidates(candidates, {"ES", {}});
    EXPECT_EQ(ranked.size(), candidates.size());
    EXPECT_TRUE(std::is_permutation(ranked.begin(), ranked.end(), candidates.begin()));
    EXPECT_EQ(ranked.front().country, "ES");
}

TEST_F(GazetteerTest, LookupIgnoresCaseAndAccents) {
    EXPECT_EQ(gaz_->resolve("BOGOTA"), gaz_->resolve("bogotá"));
    EXPECT_FALSE(gaz_->resolve("Bogotá").empty());
    EXPECT_TRUE(gaz_->resolve("Atlántida perdida").empty());
    EXPECT_TRUE(gaz_->contains("ciudad de méxico") || gaz_->contains("ciudad de mexico"));
    EXPECT_GE(gaz_->longest_name_words(), 3u);
}

TEST(Gazetteer, RejectsBadEntries) {
    Gazetteer g;
    g.add({"x", "X", 10, 10, "UY", FeatureKind::City});
    EXPECT_THROW(g.add({"x", "X", 10, 10, "UY", FeatureKind::City}), Error);
    EXPECT_THROW(g.add({"y", "Y", 91, 10, "UY", FeatureKind::City}), Error);
    EXPECT_THROW(g.add({"y", "Y", 0, -181, "UY", FeatureKind::City}), Error);
}

TEST(Gazetteer, ParsesTsv) {
    std::istringstream in("name\tdisplay_name\tlat\tlon\tcountry\tfeature\nsalto\tSalto\t-31.38\t-57.96\tUY\tcity\n");
    const auto g = Gazetteer::parse(in);
    ASSERT_EQ(g.entries().size(), 1u);
    EXPECT_EQ(g.entries()[0].feature, FeatureKind::City);
    EXPECT_EQ(gazetteer_entry_from_json(to_json(g.entries()[0])), g.entries()[0]);
}

}  // namespace
}  // namespace hemeroteca::geo
