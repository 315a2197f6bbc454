#include <gtest/gtest.h>

#include <sstream>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/lingpipe/pipeline.hpp"
#include "hemeroteca/text/normalize.hpp"
#include "hemeroteca/text/tokenizer.hpp"
#include "testkit.hpp"

namespace hemeroteca::lingpipe {
namespace {

class PipelineTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        ws_ = new app::Workspace(testkit::memory_config());
        articles_ = new std::vector<corpus::Article>(testkit::fixture_articles());
    }
    static void TearDownTestSuite() {
        delete ws_;
        delete articles_;
    }
    static const corpus::Article& article(const std::string& id) {
        return *std::find_if(articles_->begin(), articles_->end(), [&](auto& a) { return a.id == id; });
    }
    static PipelineResources res() { return ws_->pipeline_resources(); }

    static std::vector<TaggedToken> tag(std::string_view sentence) {
        return pos_tag(tokenize(sentence), *res().lexicon);
    }

    static app::Workspace* ws_;
    static std::vector<corpus::Article>* articles_;
};
app::Workspace* PipelineTest::ws_ = nullptr;
std::vector<corpus::Article>* PipelineTest::articles_ = nullptr;

TEST(Segmenter, SplitsAtSentenceEndsOnly) {
    const auto s = segment_sentences("El Sr. Pérez llegó. Llovió mucho; El río creció! ¿Quién sabe? J. M. Blanes pinta.");
    EXPECT_EQ(s, (std::vector<std::string>{"El Sr. Pérez llegó.", "Llovió mucho;", "El río creció!", "¿Quién sabe?",
                                           "J. M. Blanes pinta."}));
    EXPECT_EQ(segment_sentences("a 3.5 b. c"), (std::vector<std::string>{"a 3.5 b. c"}));
}

TEST(Tokenize, ConsecutivePositions) {
    const auto t = tokenize("Llovió en Salto.", 4);
    ASSERT_EQ(t.size(), 4u);
    for (std::uint32_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(t[i].position, i);
        EXPECT_EQ(t[i].sentence_index, 4u);
    }
    EXPECT_EQ(t[0].normalized, "llovió");
    EXPECT_TRUE(t[3].punct);
}

TEST(Lexicon, SuffixRulesAndAccentFreeLookup) {
    std::istringstream in("# c\ncanción\tNN\n-mente\tOTHER\n-ción\tNN\n-aban\tVB\n");
    const auto lex = TagLexicon::parse(in);
    EXPECT_EQ(lex.lookup("cancion"), PosTag::NN);
    EXPECT_EQ(lex.suffix_tag("rápidamente"), PosTag::OTHER);
    EXPECT_EQ(lex.suffix_tag("llevaban"), PosTag::VB);
    EXPECT_FALSE(lex.suffix_tag("sol"));
}

TEST_F(PipelineTest, TaggerPrecedence) {
    const auto t = tag("Ayer Montevideo sufrió 3 tormentas , y Xolotlán.");
    std::map<std::string, std::pair<PosTag, TagSource>> by;
    for (const auto& x : t) by[x.token.surface] = {x.tag, x.source};
    EXPECT_EQ(by["Montevideo"].first, PosTag::NNP);
    EXPECT_EQ(by["3"], std::make_pair(PosTag::CD, TagSource::Numeral));
    EXPECT_EQ(by[","].second, TagSource::Punctuation);
    EXPECT_EQ(by["tormentas"].first, PosTag::NNS);
    EXPECT_EQ(by["Xolotlán"], std::make_pair(PosTag::NNP, TagSource::Capitalization));
    EXPECT_EQ(by["y"].second, TagSource::Lexicon);
}

TEST_F(PipelineTest, DetectsEntities) {
    const auto t = tag("El presidente Porfirio Díaz visitó Ciudad de México el 12 de enero de 1805 con el Senado.");
    const auto e = detect_entities(t, res().entities);
    std::map<EntityKind, std::string> found;
    for (const auto& x : e) found[x.kind] = x.canonical;
    EXPECT_EQ(found[EntityKind::PERSON], "Porfirio Díaz");
    EXPECT_EQ(found[EntityKind::GPE], "Ciudad de México");
    EXPECT_EQ(found[EntityKind::DATE], "1805-01-12");
    EXPECT_EQ(found[EntityKind::ORG], "Senado");
    for (std::size_t i = 1; i < e.size(); ++i) {
        EXPECT_FALSE(e[i - 1].span.overlaps(e[i].span));
        EXPECT_LT(e[i - 1].span.begin, e[i].span.begin);
    }
}

TEST_F(PipelineTest, DateForms) {
    for (const auto& [text, iso] : std::vector<std::pair<std::string, std::string>>{
             {"Llovió en junio de 1805 sin parar.", "1805-06"},
             {"Llovió en el siglo XIX sin parar.", "1801..1900"},
             {"Llovió en 1888 sin parar.", "1888"}}) {
        const auto e = detect_entities(tag(text), res().entities);
        ASSERT_EQ(e.size(), 1u) << text;
        EXPECT_EQ(e[0].kind, EntityKind::DATE);
        EXPECT_EQ(e[0].canonical, iso);
    }
}

TEST_F(PipelineTest, LeavesEqualTheTokenStream) {
    for (const auto& a : *articles_) {
        const auto tree = build_content_tree(a, res());
        std::vector<std::string> leaves;
        for (const auto* l : tree.leaves()) leaves.push_back(l->term);
        std::vector<std::string> tokens;
        for (const auto& t : text::scan_tokens(a.raw_text)) tokens.push_back(t.surface);
        EXPECT_EQ(leaves, tokens) << a.id;
    }
}

TEST_F(PipelineTest, TreeShape) {
    const auto tree = build_content_tree(article("mx-1888-inundacion"), res());
    for (const auto& s : tree.sentences) {
        EXPECT_TRUE(s.root.leaves.empty());
        for (const auto& n : s.root.children) {
            EXPECT_TRUE(n.children.empty());
            EXPECT_FALSE(n.leaves.empty());
            const bool entity = n.tag == PosTag::GPE || n.tag == PosTag::PERSON || n.tag == PosTag::ORG ||
                                n.tag == PosTag::DATE;
            EXPECT_EQ(entity, !n.canonical.empty());
        }
    }
    std::set<std::string> kinds;
    for (const auto& e : tree.entities) kinds.insert(std::string(entity_name(e.kind)));
    EXPECT_EQ(kinds, (std::set<std::string>{"DATE", "GPE", "PERSON"}));
}

TEST_F(PipelineTest, DeterministicAndParallelEqualsSerial) {
    const auto a = run_pipeline(*articles_, res());
    const auto b = run_pipeline(*articles_, res());
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, run_pipeline_serial(*articles_, res()));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].tree.article_id, (*articles_)[i].id);
}

TEST_F(PipelineTest, BlankTextHasNothingToParse) {
    corpus::Article a = article("uy-1802-temporal");
    a.raw_text = "  \n ";
    EXPECT_THROW(build_content_tree(a, res()), Error);
}

TEST_F(PipelineTest, CandidatesBundleTriggersWithContext) {
    const auto tree = build_content_tree(article("uy-1888-tormenta"), res());
    const auto c = extract_event_candidates(tree, res());
    ASSERT_EQ(c.size(), 1u);
    std::set<std::string> triggers, places, dates;
    for (const auto& t : c[0].triggers) triggers.insert(t.term);
    for (const auto& l : c[0].locations) places.insert(l.canonical);
    for (const auto& d : c[0].dates) dates.insert(d.canonical);
    EXPECT_TRUE(triggers.contains("tormenta fuerte") || triggers.contains("tormenta"));
    EXPECT_TRUE(places.contains("Montevideo"));
    EXPECT_TRUE(dates.contains("1888-10-29"));
    EXPECT_EQ(c[0].status, CandidateStatus::Pending);
    EXPECT_EQ(candidate_from_json(to_json(c[0])), c[0]);
}

TEST_F(PipelineTest, NoCandidateWithoutMeteorologicalTerms) {
    EXPECT_TRUE(extract_event_candidates(build_content_tree(article("uy-1810-noticias"), res()), res()).empty());
    EXPECT_TRUE(extract_event_candidates(build_content_tree(article("co-1891-politica"), res()), res()).empty());
}

TEST_F(PipelineTest, MetaphorStillProposesACandidate) {
    const auto c = extract_event_candidates(build_content_tree(article("ec-1878-senado"), res()), res());
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].triggers.front().concept_term, "tormenta");
}

TEST_F(PipelineTest, HyphenatedLineBreakIsOneTrigger) {
    const auto c = extract_event_candidates(build_content_tree(article("uy-1890-tormen"), res()), res());
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].triggers.front().term, "tormenta");
}

TEST(Span, KeyRoundTrip) {
    const Span s{2, 3, 5};
    EXPECT_EQ(s.key(), "2:3-5");
    EXPECT_EQ(Span::parse("2:3-5"), s);
    EXPECT_THROW(Span::parse("2-3"), Error);
}

}  // namespace
}  // namespace hemeroteca::lingpipe
