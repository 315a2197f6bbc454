#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/corpus/index.hpp"
#include "hemeroteca/geo/gazetteer.hpp"
#include "hemeroteca/query/evaluate.hpp"
#include "hemeroteca/query/parser.hpp"
#include "hemeroteca/query/rewrite.hpp"
#include "hemeroteca/query/rules.hpp"
#include "hemeroteca/vocab/vocabulary.hpp"
#include "testkit.hpp"

namespace hemeroteca::query {
namespace {

QueryExpr T(std::string_view s) { return QueryExpr::term(s); }

TEST(Parser, AndBindsTighterThanOr) {
    EXPECT_EQ(parse_query("a OR b AND c"), QueryExpr::any_of({T("a"), QueryExpr::all_of({T("b"), T("c")})}));
    EXPECT_EQ(parse_query("a b"), QueryExpr::all_of({T("a"), T("b")}));
    EXPECT_EQ(parse_query("(a o b) y c"), QueryExpr::all_of({QueryExpr::any_of({T("a"), T("b")}), T("c")}));
}

TEST(Parser, PhrasesAreNormalized) {
    const auto q = parse_query("\"Tormenta  FUERTE\"");
    ASSERT_TRUE(q.is_term());
    EXPECT_EQ(q.phrase, (std::vector<std::string>{"tormenta", "fuerte"}));
}

TEST(Parser, CanonicalizesNesting) {
    EXPECT_EQ(parse_query("a AND (b AND c) AND a"), QueryExpr::all_of({T("a"), T("b"), T("c")}));
    EXPECT_EQ(parse_query("((a))"), T("a"));
}

TEST(Parser, ConstraintsInBrackets) {
    const auto q = parse_query("tormenta OR [wind_speed_kmh > 118 km/h]");
    ASSERT_EQ(q.children.size(), 2u);
    ASSERT_TRUE(q.children[1].is_constraint());
    const auto& c = *q.children[1].constraint;
    EXPECT_EQ(c.attribute, Attribute::WindSpeedKmh);
    EXPECT_EQ(c.op, Comparator::Greater);
    EXPECT_EQ(c.value, 118);
    EXPECT_TRUE(has_constraints(q));
}

TEST(Parser, ReportsOffsets) {
    auto offset_of = [](std::string_view text) -> std::size_t {
        try {
            parse_query(text);
        } catch (const ParseError& e) {
            return e.offset();
        }
        return std::string::npos;
    };
    EXPECT_EQ(offset_of("a AND (b OR c"), 6u);
    EXPECT_EQ(offset_of("a OR"), 2u);
    EXPECT_EQ(offset_of("a ) b"), 2u);
    EXPECT_EQ(offset_of("\"abierta"), 0u);
    EXPECT_NE(offset_of(""), std::string::npos);
}

TEST(Parser, RenderRoundTrips) {
    std::mt19937 rng(23);
    for (int i = 0; i < 300; ++i) {
        const auto q = canonicalize(testkit::random_query(rng, 4, testkit::random_words()));
        EXPECT_EQ(parse_query(render(q)), q) << render(q);
        EXPECT_EQ(query_from_json(to_json(q)), q);
    }
    for (const auto* text : {"[rain_mmh between 2.5 7.5 mm/h]", "[river_state in crecida|desborde]",
                             "[reach_km <= 1000 km @ \"Ciudad de México\" 19.4326 -99.1332]"}) {
        const auto q = parse_query(text);
        EXPECT_EQ(render(q), text);
        EXPECT_EQ(query_from_json(to_json(q)), q);
    }
}

TEST(Expr, DepthAndLeaves) {
    const auto q = parse_query("(a OR \"b c\") AND a");
    EXPECT_EQ(depth(q), 3);
    EXPECT_EQ(term_leaves(q), (std::vector<std::vector<std::string>>{{"a"}, {"b", "c"}}));
    EXPECT_THROW(QueryExpr::term("  ,; "), Error);
}

TEST(Evaluate, MatchesBruteForceOracle) {
    std::mt19937 rng(101);
    for (int round = 0; round < 40; ++round) {
        const auto corpus = testkit::random_corpus(rng, 100);
        const auto idx = corpus::build_index(corpus);
        for (int i = 0; i < 10; ++i) {
            const auto q = testkit::random_query(rng, 4, testkit::random_words());
            std::set<std::string> got;
            for (const auto& r : evaluate(q, idx)) got.insert(r.doc);
            EXPECT_EQ(got, testkit::oracle_matches(q, corpus)) << render(q);
            EXPECT_EQ(matching_docs(q, idx), got);
        }
    }
}

TEST(Evaluate, RanksByDistinctMatchingTermsThenDateThenId) {
    std::vector<corpus::Article> docs(4);
    const char* texts[] = {"lluvia", "lluvia viento", "lluvia viento", "viento granizo lluvia"};
    const int years[] = {1800, 1890, 1850, 1850};
    for (int i = 0; i < 4; ++i) {
        docs[i].id = "d" + std::to_string(i);
        docs[i].raw_text = texts[i];
        docs[i].publication_date = PartialDate(years[i]);
    }
    const auto idx = corpus::build_index(docs);
    const auto r = evaluate(parse_query("lluvia OR viento OR granizo"), idx);
    ASSERT_EQ(r.size(), 4u);
    EXPECT_EQ(r[0], (ScoredDoc{"d3", 3}));
    EXPECT_EQ(r[1], (ScoredDoc{"d2", 2}));
    EXPECT_EQ(r[2], (ScoredDoc{"d1", 2}));
    EXPECT_EQ(r[3], (ScoredDoc{"d0", 1}));
}

TEST(Evaluate, PhrasesNeedConsecutiveTokensAndAccentsAreOptional) {
    std::vector<corpus::Article> docs(2);
    docs[0].id = "a";
    docs[0].raw_text = "Gran inundación del río";
    docs[1].id = "b";
    docs[1].raw_text = "río del norte, gran inundacion";
    const auto idx = corpus::build_index(docs);
    EXPECT_EQ(matching_docs(T("del río"), idx), (std::set<std::string>{"a"}));
    EXPECT_EQ(matching_docs(T("rio del"), idx), (std::set<std::string>{"b"}));
    EXPECT_EQ(matching_docs(T("inundación del"), idx), (std::set<std::string>{"a"}));
    EXPECT_EQ(matching_docs(T("inundacion"), idx), (std::set<std::string>{"a", "b"}));
    EXPECT_EQ(matching_docs(T("inundación"), idx), (std::set<std::string>{"a"}));
}

TEST(Evaluate, ConstraintsNeedEventHistory) {
    const auto idx = corpus::build_index(testkit::fixture_articles());
    EXPECT_THROW(evaluate(parse_query("[wind_speed_kmh > 118 km/h]"), idx), Error);
}

class RewriteTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        vocab_ = new vocab::Vocabulary;
        vocab_->load_resources(testkit::resources_dir());
        gaz_ = new geo::Gazetteer(geo::Gazetteer::load(testkit::resources_dir() / "gazetteer.tsv"));
        rules_ = new std::vector<DomainRule>(load_rules(testkit::resources_dir() / "rules.jsonl"));
    }
    static void TearDownTestSuite() {
        delete vocab_;
        delete gaz_;
        delete rules_;
    }
    static vocab::Vocabulary* vocab_;
    static geo::Gazetteer* gaz_;
    static std::vector<DomainRule>* rules_;
};
vocab::Vocabulary* RewriteTest::vocab_ = nullptr;
geo::Gazetteer* RewriteTest::gaz_ = nullptr;
std::vector<DomainRule>* RewriteTest::rules_ = nullptr;

bool contains_term(const QueryExpr& q, std::string_view phrase) {
    for (const auto& leaf : term_leaves(q))
        if (QueryExpr::term(leaf).phrase_text() == phrase) return true;
    return false;
}

TEST_F(RewriteTest, DisjunctiveExtensionAddsAlternatives) {
    const auto q = extend_with_thesaurus(T("tormenta"), *vocab_);
    EXPECT_EQ(q.kind, QueryExpr::Kind::Or);
    EXPECT_EQ(q.children.front(), T("tormenta"));
    EXPECT_TRUE(contains_term(q, "tempestad"));
    EXPECT_TRUE(contains_term(q, "fenómeno meteorológico"));
}

TEST_F(RewriteTest, ConjunctiveExtensionRequiresTheBroaderTerm) {
    ExtendOptions o;
    o.mode = HypernymMode::Conjunctive;
    const auto q = extend_with_thesaurus(T("tormenta"), *vocab_, o);
    ASSERT_EQ(q.kind, QueryExpr::Kind::And);
    EXPECT_TRUE(contains_term(q.children[0], "tempestad"));
    EXPECT_EQ(q.children[1], T("fenómeno meteorológico"));
}

TEST_F(RewriteTest, TermsWithoutRelationsAreUnchanged) {
    EXPECT_EQ(extend_with_thesaurus(T("senado"), *vocab_), T("senado"));
    EXPECT_EQ(localize_query(T("senado"), *vocab_, "MX"), T("senado"));
}

TEST_F(RewriteTest, LocalizationPerCountry) {
    EXPECT_TRUE(contains_term(localize_query(T("tormenta"), *vocab_, "MX"), "chaparrón"));
    EXPECT_TRUE(contains_term(localize_query(T("tormenta"), *vocab_, "UY"), "chubasco"));
    EXPECT_FALSE(contains_term(localize_query(T("tormenta"), *vocab_, "MX"), "chubasco"));
}

TEST_F(RewriteTest, UnsupportedCountryListsSupportedOnes) {
    try {
        localize_query(T("tormenta"), *vocab_, "PE");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ValidationFailed);
        EXPECT_EQ(e.details(), (std::vector<std::string>{"CO", "EC", "MX", "UY"}));
    }
}

TEST_F(RewriteTest, GeoContextResolvesPlaceAndRadius) {
    const auto g = parse_geo_context("Mexico City, 500 km", *gaz_);
    EXPECT_EQ(g.place, "Ciudad de México");
    EXPECT_NEAR(g.lat, 19.4326, 1e-4);
    EXPECT_EQ(g.radius_km, 500);
    EXPECT_THROW(parse_geo_context("Mexico City", *gaz_), Error);
    EXPECT_THROW(parse_geo_context("Mexico City, -3", *gaz_), Error);
    try {
        parse_geo_context("Atlántida, 10", *gaz_);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotFound);
    }
}

TEST_F(RewriteTest, RuleExpansionVariants) {
    const auto q = parse_query("\"tormenta fuerte\"");
    const auto plain = rule_expand(q, *rules_);
    ASSERT_GE(plain.size(), 4u);
    EXPECT_EQ(plain.front(), q);
    for (std::size_t i = 0; i < plain.size(); ++i)
        for (std::size_t j = i + 1; j < plain.size(); ++j) EXPECT_NE(plain[i], plain[j]);
    const auto geo = parse_geo_context("Mexico City, 500", *gaz_);
    const auto with_geo = rule_expand(q, *rules_, geo);
    EXPECT_GT(with_geo.size(), plain.size());
    bool reach = false;
    for (const auto& v : with_geo)
        if (render(v).find("reach_km <= 500 km @ \"Ciudad de México\"") != std::string::npos) reach = true;
    EXPECT_TRUE(reach);
    EXPECT_EQ(rule_expand(T("senado"), *rules_), std::vector<QueryExpr>{T("senado")});
}

TEST_F(RewriteTest, PlanLocalizesTheExtendedQuery) {
    RewriteOptions o;
    o.extend = true;
    o.localize = {"*"};
    const auto plan = plan_rewrites(T("tormenta"), *vocab_, *rules_, o);
    EXPECT_EQ(plan.localized.size(), 4u);
    EXPECT_TRUE(contains_term(plan.localized.at("MX"), "tempestad"));
    EXPECT_TRUE(plan.rule_variants.empty());
    const auto j = to_json(plan);
    EXPECT_EQ(j["original"]["text"], "tormenta");
    EXPECT_TRUE(j["localized"].contains("UY"));
}

TEST(Rules, ParseAndValidate) {
    std::istringstream in(
        R"({"id":"X1","trigger":"Tormenta Fuerte","implications":[{"attribute":"wind_speed_kmh","op":">","value":100,"unit":"km/h"}]})"
        "\n");
    const auto rules = parse_rules(in);
    ASSERT_EQ(rules.size(), 1u);
    EXPECT_EQ(rules[0].trigger, "tormenta fuerte");
    EXPECT_EQ(rules[0].implications[0].constraint.value, 100);
    vocab::Vocabulary v;
    v.load_resources(testkit::resources_dir());
    EXPECT_NO_THROW(validate_rules(rules, v));
    std::istringstream bad(R"({"id":"X2","trigger":"senado","implications":[]})" "\n");
    EXPECT_THROW(validate_rules(parse_rules(bad), v), Error);
    std::istringstream broken(R"({"id":"X3","trigger":"tormenta","implications":[{"attribute":"heat","op":">","value":1}]})" "\n");
    EXPECT_THROW(parse_rules(broken), Error);
}

TEST(Rules, ShippedRulesHaveTheExpectedThresholds) {
    const auto rules = load_rules(testkit::resources_dir() / "rules.jsonl");
    const auto r1 = std::find_if(rules.begin(), rules.end(), [](const DomainRule& r) { return r.id == "R1"; });
    ASSERT_NE(r1, rules.end());
    EXPECT_EQ(r1->implications[0].constraint.attribute, Attribute::WindSpeedKmh);
    EXPECT_EQ(r1->implications[0].constraint.value, 118);
    for (const auto& r : rules) {
        std::istringstream in(to_json(r).dump());
        EXPECT_EQ(parse_rules(in).front(), r);
    }
}

TEST(Rules, TriggerMatching) {
    EXPECT_EQ(singular_key("tormentas"), "tormenta");
    EXPECT_EQ(singular_key("inundaciones"), "inundacion");
    EXPECT_TRUE(phrase_matches_trigger({"fuertes", "tormentas"}, "tormenta fuerte"));
    EXPECT_FALSE(phrase_matches_trigger({"tormenta"}, "tormenta fuerte"));
}

TEST(Constraint, Accepts) {
    Constraint c;
    c.op = Comparator::Between;
    c.value = 2.5;
    c.upper = 7.5;
    EXPECT_TRUE(c.accepts(2.5));
    EXPECT_TRUE(c.accepts(7.5));
    EXPECT_FALSE(c.accepts(7.6));
    c.op = Comparator::Greater;
    c.value = 118;
    EXPECT_FALSE(c.accepts(118));
    EXPECT_TRUE(c.accepts(118.1));
}

}  // namespace
}  // namespace hemeroteca::query
