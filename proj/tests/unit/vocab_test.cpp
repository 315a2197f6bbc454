#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/corpus/index.hpp"
#include "hemeroteca/text/tokenizer.hpp"
#include "hemeroteca/vocab/term_frequency.hpp"
#include "hemeroteca/vocab/vocabulary.hpp"
#include "testkit.hpp"

namespace hemeroteca::vocab {
namespace {

class VocabularyTest : public ::testing::Test {
protected:
    void SetUp() override { vocab_.load_resources(testkit::resources_dir()); }
    Vocabulary vocab_;
};

TEST_F(VocabularyTest, SynonymsReadBothWays) {
    EXPECT_TRUE(vocab_.expand_term("tormenta").synonyms.contains("tempestad"));
    EXPECT_TRUE(vocab_.expand_term("tempestad").synonyms.contains("tormenta"));
    EXPECT_FALSE(vocab_.expand_term("tormenta").synonyms.contains("tormenta"));
}

TEST_F(VocabularyTest, HypernymsAndHyponyms) {
    const auto e = vocab_.expand_term("Tormenta");
    EXPECT_TRUE(e.hypernyms.contains("fenómeno meteorológico"));
    EXPECT_TRUE(e.hyponyms.contains("tormenta fuerte"));
    EXPECT_TRUE(e.hyponyms.contains("huracán"));
    const auto only_syn = vocab_.expand_term("tormenta", {true, false, false});
    EXPECT_TRUE(only_syn.hypernyms.empty());
    EXPECT_TRUE(only_syn.hyponyms.empty());
}

TEST_F(VocabularyTest, DepthFollowsHypernymChains) {
    EXPECT_FALSE(vocab_.expand_term("huracán", {false, true, false}, 1).hypernyms.contains("fenómeno meteorológico"));
    EXPECT_TRUE(vocab_.expand_term("huracán", {false, true, false}, 2).hypernyms.contains("fenómeno meteorológico"));
}

TEST_F(VocabularyTest, CulturalEquivalentsPerCountry) {
    EXPECT_TRUE(vocab_.cultural_equivalents("tormenta", "MX").contains("chaparrón"));
    EXPECT_TRUE(vocab_.cultural_equivalents("tormenta", "UY").contains("chubasco"));
    EXPECT_TRUE(vocab_.cultural_equivalents("tormenta", "UY").contains("sudestada"));
    EXPECT_FALSE(vocab_.cultural_equivalents("tormenta", "MX").contains("chubasco"));
    EXPECT_TRUE(vocab_.cultural_equivalents("chubasco", "MX").contains("chaparrón"));
    EXPECT_EQ(vocab_.supported_countries(), (std::set<std::string>{"CO", "EC", "MX", "UY"}));
}

TEST_F(VocabularyTest, MeteorologicalTermsIgnoreAccents) {
    EXPECT_TRUE(vocab_.is_meteorological("inundación"));
    EXPECT_TRUE(vocab_.is_meteorological("inundacion"));
    EXPECT_TRUE(vocab_.is_meteorological("garúa"));
    EXPECT_FALSE(vocab_.is_meteorological("senado"));
}

TEST_F(VocabularyTest, HypernymCyclesAreRejected) {
    try {
        vocab_.link_terms("fenómeno meteorológico", "huracán", RelationKind::Hypernym);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Conflict);
    }
}

TEST_F(VocabularyTest, DuplicatesAreNoOps) {
    const auto before = vocab_.relations().size();
    vocab_.link_terms("tempestad", "tormenta", RelationKind::Synonym);
    vocab_.link_terms("tormenta", "tempestad", RelationKind::Synonym);
    EXPECT_EQ(vocab_.relations().size(), before);
    const auto entries = vocab_.entries().size();
    const auto e = vocab_.add_term("Chaparrón", "MX", Register::Scientific);
    EXPECT_EQ(e.register_, Register::Colloquial);
    EXPECT_EQ(vocab_.entries().size(), entries);
}

TEST(Vocabulary, JournalReplaysAnalystEdits) {
    testkit::TempDir dir;
    const auto journal = dir.path() / "vocabulary.journal";
    {
        Vocabulary v;
        v.load_resources(testkit::resources_dir());
        v.attach_journal(journal);
        v.add_term("turbión", "CO", Register::Colloquial);
        v.link_terms("turbión", "tormenta", RelationKind::CulturalEquivalent, "CO");
    }
    Vocabulary v;
    v.load_resources(testkit::resources_dir());
    EXPECT_FALSE(v.entry("turbión", "CO"));
    v.attach_journal(journal);
    ASSERT_TRUE(v.entry("turbión", "CO"));
    EXPECT_EQ(v.entry("turbión", "CO")->added_by, Origin::Analyst);
    EXPECT_TRUE(v.cultural_equivalents("tormenta", "CO").contains("turbión"));
}

TEST(Vocabulary, NamesRoundTrip) {
    for (auto k : {RelationKind::Synonym, RelationKind::Hypernym, RelationKind::CulturalEquivalent,
                   RelationKind::ScientificEquivalent})
        EXPECT_EQ(parse_relation(relation_name(k)), k);
    EXPECT_EQ(parse_register(register_name(Register::Scientific)), Register::Scientific);
    EXPECT_THROW(parse_relation("antonym"), Error);
}

// Independent per-cell recount: every (doc, term) cell scans the token list.
std::uint32_t recount(const std::vector<std::string>& tokens, const std::string& term) {
    return static_cast<std::uint32_t>(std::count(tokens.begin(), tokens.end(), term));
}

TEST(TermFrequency, CountsEqualNaiveRecount) {
    const auto articles = testkit::fixture_articles();
    const auto stoplist = Stoplist::load(testkit::resources_dir() / "stoplist.txt");
    for (const Stoplist* stop : {static_cast<const Stoplist*>(nullptr), &stoplist}) {
        const auto m = build_tf_matrix(articles, stop);
        std::map<std::string, std::vector<std::string>> tokens;
        std::set<std::string> expected_terms;
        for (const auto& a : articles) {
            tokens[a.id] = text::normalized_words(a.raw_text);
            for (const auto& w : tokens[a.id])
                if (!stop || !stop->contains(w)) expected_terms.insert(w);
        }
        ASSERT_EQ(m.docs.size(), articles.size());
        EXPECT_EQ(std::set<std::string>(m.terms.begin(), m.terms.end()), expected_terms);
        EXPECT_TRUE(std::is_sorted(m.docs.begin(), m.docs.end()));
        EXPECT_TRUE(std::is_sorted(m.terms.begin(), m.terms.end()));
        std::size_t discrepancies = 0;
        for (std::size_t d = 0; d < m.docs.size(); ++d) {
            const auto& toks = tokens.at(m.docs[d]);
            if (m.doc_lengths[d] != toks.size()) ++discrepancies;
            for (std::size_t t = 0; t < m.terms.size(); ++t)
                if (m.at(d, t) != recount(toks, m.terms[t])) ++discrepancies;
        }
        EXPECT_EQ(discrepancies, 0u);
    }
}

TEST(TermFrequency, DocLengthsAgreeWithIndex) {
    const auto articles = testkit::fixture_articles();
    const auto m = build_tf_matrix(articles);
    const auto idx = corpus::build_index(articles);
    for (std::size_t d = 0; d < m.docs.size(); ++d) EXPECT_EQ(m.doc_lengths[d], idx.doc_length(m.docs[d]));
}

TEST(TermFrequency, ParallelEqualsSerial) {
    std::mt19937 rng(17);
    for (int i = 0; i < 20; ++i) {
        const auto corpus = testkit::random_corpus(rng, 100);
        EXPECT_EQ(build_tf_matrix(corpus), build_tf_matrix_serial(corpus));
    }
}

TEST(TermFrequency, TopTermsAreDeterministic) {
    auto articles = testkit::fixture_articles();
    const auto stoplist = Stoplist::load(testkit::resources_dir() / "stoplist.txt");
    const auto m = build_tf_matrix(articles, &stoplist);
    const auto top = top_terms(m, 15);
    ASSERT_EQ(top.size(), 15u);
    for (std::size_t i = 1; i < top.size(); ++i)
        EXPECT_TRUE(top[i - 1].second > top[i].second ||
                    (top[i - 1].second == top[i].second && top[i - 1].first < top[i].first));
    std::reverse(articles.begin(), articles.end());
    EXPECT_EQ(top_terms(build_tf_matrix(articles, &stoplist), 15), top);
    std::map<std::string, std::uint64_t> totals;
    for (std::size_t t = 0; t < m.terms.size(); ++t) totals[m.terms[t]] = m.column_total(t);
    for (const auto& [term, n] : top) EXPECT_EQ(totals.at(term), n);
}

TEST(TermFrequency, NormalizedRowsAndGrid) {
    corpus::Article a;
    a.id = "a";
    a.raw_text = "lluvia lluvia sol de";
    const auto m = build_tf_matrix(std::span(&a, 1), nullptr);
    const auto norm = normalized_rows(m);
    ASSERT_EQ(m.terms, (std::vector<std::string>{"de", "lluvia", "sol"}));
    EXPECT_DOUBLE_EQ(norm[1], 0.5);
    std::ostringstream out;
    write_tf_grid(out, m, false, ',');
    EXPECT_EQ(out.str(), "doc,de,lluvia,sol\na,1,2,1\n");
}

TEST(Stoplist, ParsesWordsAndSkipsComments) {
    std::istringstream in("# comment\nde\nLa\n\n");
    const auto s = Stoplist::parse(in);
    EXPECT_EQ(s.size(), 2u);
    EXPECT_TRUE(s.contains("la"));
}

}  // namespace
}  // namespace hemeroteca::vocab
