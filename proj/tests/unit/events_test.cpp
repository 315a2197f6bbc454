#include <gtest/gtest.h>

#include <random>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/events/analytics.hpp"
#include "hemeroteca/events/store.hpp"
#include "hemeroteca/query/parser.hpp"
#include "hemeroteca/text/normalize.hpp"
#include "hemeroteca/text/tokenizer.hpp"
#include "hemeroteca/vocab/vocabulary.hpp"
#include "testkit.hpp"

namespace hemeroteca::events {
namespace {

ClimateEvent point_event(std::string id, double lat, double lon, PartialDate date = PartialDate(1880)) {
    ClimateEvent e;
    e.id = std::move(id);
    e.date = date;
    e.scope = {{"P", lon, lat, "UY"}};
    return e;
}

query::Constraint constraint(const std::string& text) { return *query::parse_query(text).constraint; }

TEST(Fixture, FortySinglePointEvents) {
    const auto events = testkit::fixture_events();
    ASSERT_EQ(events.size(), 40u);
    for (const auto& e : events) {
        EXPECT_EQ(e.scope.size(), 1u);
        EXPECT_NO_THROW(validate(e));
    }
}

TEST(Query, MatchesLinearScan) {
    const auto events = testkit::fixture_events();
    std::mt19937 rng(8);
    std::size_t nonempty = 0;
    for (int i = 0; i < 300; ++i) {
        const auto f = testkit::random_event_filter(rng);
        std::vector<std::string> got;
        for (const auto& e : query_events(events, f)) got.push_back(e.id);
        EXPECT_EQ(got, testkit::oracle_events(events, f));
        nonempty += got.empty() ? 0 : 1;
    }
    EXPECT_GT(nonempty, 100u);
}

TEST(Query, NameAndDamageIgnoreCaseAndAccents) {
    const auto events = testkit::fixture_events();
    EventFilter f;
    f.name = "ciclon de san narciso";
    for (const auto& e : query_events(events, f)) EXPECT_EQ(e.name, "Ciclón de San Narciso");
    f = {};
    f.damage_term = "Perdida de cosechas";
    const auto hits = query_events(events, f);
    EXPECT_FALSE(hits.empty());
    for (const auto& e : hits) EXPECT_TRUE(e.damages.contains("pérdida de cosechas"));
}

TEST(Query, InvalidFiltersAreRejected) {
    EventFilter f;
    f.radius_km = 10;
    EXPECT_THROW(f.validate(), Error);
    f.center = geo::GeoPoint{0, 0};
    f.radius_km = -1;
    EXPECT_THROW(f.validate(), Error);
    EXPECT_THROW(BBox::parse("10,0,5,1"), Error);
    EXPECT_THROW(BBox::parse("1,2,3"), Error);
    EXPECT_EQ(BBox::parse("-60,-120,35,-30"), kLatinAmerica);
}

TEST(Heatmap, CountsSumToFilteredEvents) {
    const auto events = testkit::fixture_events();
    std::mt19937 rng(13);
    for (int i = 0; i < 100; ++i) {
        const auto f = testkit::random_event_filter(rng);
        const auto hits = query_events(events, f);
        for (double cell : {0.5, 1.0, 2.5, 10.0}) {
            const auto g = heatmap(hits, cell, *f.bbox);
            EXPECT_EQ(g.total(), hits.size());
            EXPECT_EQ(g, heatmap_serial(hits, cell, *f.bbox));
        }
    }
}

TEST(Heatmap, CellsAndEdges) {
    HeatmapGrid g;
    g.bbox = {0, 0, 10, 10};
    g.cell_deg = 3;
    EXPECT_EQ(g.rows(), 4);
    EXPECT_EQ(g.cell_of({0, 0}), std::make_pair(0, 0));
    EXPECT_EQ(g.cell_of({10, 10}), std::make_pair(3, 3));
    EXPECT_EQ(g.cell_of({3, 5.9}), std::make_pair(1, 1));
    EXPECT_FALSE(g.cell_of({-0.1, 5}));
}

TEST(Heatmap, MultiPointEventCountsOncePerCell) {
    ClimateEvent e = point_event("ev-1", 1.2, 1.2);
    e.scope.push_back({"Q", 1.7, 1.7, "UY"});
    e.scope.push_back({"R", 5.5, 5.5, "UY"});
    const auto g = heatmap(std::span(&e, 1), 1.0, BBox{0, 0, 10, 10});
    EXPECT_EQ(g.cells.size(), 2u);
    EXPECT_EQ(g.total(), 2u);
}

TEST(Heatmap, ExportIsAFeatureCollection) {
    const auto events = testkit::fixture_events();
    const auto j = export_heatmap(heatmap(events));
    EXPECT_EQ(j["type"], "FeatureCollection");
    std::uint64_t total = 0;
    for (const auto& f : j["features"]) {
        EXPECT_EQ(f["geometry"]["type"], "Polygon");
        EXPECT_EQ(f["geometry"]["coordinates"][0].size(), 5u);
        total += f["properties"]["count"].get<std::uint64_t>();
    }
    EventFilter in_region;
    in_region.bbox = kLatinAmerica;
    EXPECT_EQ(total, query_events(events, in_region).size());
}

TEST(Export, JsonlRoundTripsAndGeojsonHasOneFeaturePerEvent) {
    auto events = testkit::fixture_events();
    std::reverse(events.begin(), events.end());
    const auto jsonl = export_events(events, "jsonl");
    auto back = import_events(jsonl);
    std::sort(events.begin(), events.end(), [](auto& a, auto& b) { return a.id < b.id; });
    EXPECT_EQ(back, events);
    const auto geo = nlohmann::json::parse(export_events(events, "geojson"));
    ASSERT_EQ(geo["features"].size(), 40u);
    EXPECT_EQ(geo["features"][0]["geometry"]["type"], "MultiPoint");
    EXPECT_THROW(export_events(events, "csv"), Error);
}

TEST(MostReported, OrdersByArticleCountThenDate) {
    std::vector<ClimateEvent> ev{point_event("ev-3", 0, 0, PartialDate(1890)), point_event("ev-1", 0, 0, PartialDate(1895)),
                                 point_event("ev-2", 0, 0, PartialDate(1880))};
    ev[0].articles = {"a", "b"};
    ev[1].articles = {"a", "b", "c"};
    ev[2].articles = {"d", "e"};
    const auto top = most_reported(ev, {}, 2);
    ASSERT_EQ(top.size(), 2u);
    EXPECT_EQ(top[0].first.id, "ev-1");
    EXPECT_EQ(top[1].first.id, "ev-2");
    EXPECT_EQ(top[1].second, 2u);
}

TEST(Evolution, BucketsAndCountsAgreeWithRecount) {
    vocab::Vocabulary v;
    v.load_resources(testkit::resources_dir());
    const auto articles = testkit::fixture_articles();
    const auto buckets = year_buckets(1800, 1900, 25);
    ASSERT_EQ(buckets.size(), 5u);
    EXPECT_EQ(buckets.back(), DateRange::years(1900, 1900));
    EXPECT_THROW(year_buckets(1800, 1900, 0), Error);
    const auto evo = term_evolution(articles, v, "tormenta", buckets);
    ASSERT_EQ(evo.series.size(), 4u);
    for (const auto& s : evo.series) {
        for (std::size_t b = 0; b < buckets.size(); ++b) {
            std::uint64_t expected = 0;
            for (const auto& a : articles) {
                if (a.newspaper.country != s.country || !buckets[b].contains(a.publication_date)) continue;
                const auto words = text::normalized_words(a.raw_text);
                for (const auto& t : s.terms) {
                    const auto needle = text::phrase_words(t);
                    for (auto it = words.begin(); (it = std::search(it, words.end(), needle.begin(), needle.end())) != words.end(); ++it)
                        ++expected;
                }
            }
            EXPECT_EQ(s.totals[b], expected) << s.country << " " << b;
        }
    }
    const auto uy = std::find_if(evo.series.begin(), evo.series.end(), [](auto& s) { return s.country == "UY"; });
    EXPECT_NE(std::find(uy->terms.begin(), uy->terms.end(), "chubasco"), uy->terms.end());
}

TEST(Measurement, IntervalPossibility) {
    const auto wind_gt_118 = constraint("[wind_speed_kmh > 118 km/h]");
    const auto m = Measurement::from_constraint(wind_gt_118, "R1");
    EXPECT_TRUE(m.may_satisfy(constraint("[wind_speed_kmh > 100 km/h]")));
    EXPECT_TRUE(m.may_satisfy(constraint("[wind_speed_kmh >= 200 km/h]")));
    EXPECT_FALSE(m.may_satisfy(constraint("[wind_speed_kmh <= 118 km/h]")));
    EXPECT_TRUE(Measurement::reported(80).may_satisfy(constraint("[wind_speed_kmh between 50 90 km/h]")));
    EXPECT_FALSE(Measurement::reported(80).may_satisfy(constraint("[wind_speed_kmh > 80 km/h]")));
    EXPECT_TRUE(Measurement::reported_label("crecida").may_satisfy(constraint("[river_state in crecida|desborde]")));
}

TEST(Inference, FillsMissingAttributesFromRules) {
    const auto rules = query::load_rules(testkit::resources_dir() / "rules.jsonl");
    ClimateEvent e = point_event("ev-1", -34.9, -56.2);
    e.terms = {"tormentas fuertes"};
    e.attributes[query::Attribute::RainMmh] = Measurement::reported(20);
    const auto out = infer_attributes(e, rules);
    ASSERT_TRUE(out.attributes.contains(query::Attribute::WindSpeedKmh));
    EXPECT_EQ(out.attributes.at(query::Attribute::WindSpeedKmh).inferred_by_rule, "R1");
    EXPECT_TRUE(out.attributes.at(query::Attribute::RainMmh).is_reported());
    EXPECT_FALSE(out.attributes.contains(query::Attribute::ReachKm));
    EXPECT_EQ(infer_attributes(out, rules), out);
}

TEST(Satisfies, ReachUsesScopeDistance) {
    const auto e = point_event("ev-1", 19.0414, -98.2063);  // Puebla
    EXPECT_TRUE(satisfies(e, constraint("[reach_km <= 500 km @ \"Ciudad de México\" 19.4326 -99.1332]")));
    EXPECT_FALSE(satisfies(e, constraint("[reach_km <= 50 km @ \"Ciudad de México\" 19.4326 -99.1332]")));
    EXPECT_FALSE(satisfies(e, constraint("[wind_speed_kmh > 1 km/h]")));
}

TEST(Validate, ListsEveryProblem) {
    ClimateEvent e;
    e.date = PartialDate(1880);
    e.duration = DateRange::years(1890, 1891);
    try {
        validate(e);
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.details().size(), 3u);
    }
}

TEST(Store, PersistsCompactsAndAnswersConstraints) {
    testkit::TempDir dir;
    {
        EventStore store(dir.path());
        EXPECT_EQ(store.next_id(), "ev-0001");
        for (const auto& e : testkit::fixture_events()) store.put(e);
        auto changed = store.get("ev-0002");
        changed.attributes[query::Attribute::WindSpeedKmh] = Measurement::reported(130);
        store.put(changed);
        EXPECT_EQ(store.log_records(), 41u);
        EXPECT_EQ(store.next_id(), "ev-0041");
    }
    EventStore reopened(dir.path());
    EXPECT_EQ(reopened.size(), 40u);
    EXPECT_TRUE(reopened.article_satisfies("art-002", constraint("[wind_speed_kmh > 118 km/h]")));
    EXPECT_FALSE(reopened.article_satisfies("art-003", constraint("[wind_speed_kmh > 118 km/h]")));
    EXPECT_EQ(reopened.for_article("art-002").size(), 1u);
    EXPECT_EQ(reopened.compact(), 1u);
    EXPECT_EQ(EventStore(dir.path()).all(), reopened.all());
    EXPECT_THROW(reopened.get("ev-9999"), Error);
    ClimateEvent bad;
    bad.id = "ev-bad";
    EXPECT_THROW(reopened.put(bad), Error);
}

TEST(Store, CompactsStaleLogOnOpen) {
    testkit::TempDir dir;
    const auto events = testkit::fixture_events();
    {
        EventStore store(dir.path());
        for (int round = 0; round < 4; ++round)
            for (const auto& e : events) store.put(e);
        EXPECT_EQ(store.log_records(), 160u);
    }
    EventStore reopened(dir.path());
    EXPECT_EQ(reopened.log_records(), 40u);
    EXPECT_EQ(reopened.all().size(), 40u);
    EXPECT_EQ(reopened.for_article("art-001").size(), 1u);
}

}  // namespace
}  // namespace hemeroteca::events
