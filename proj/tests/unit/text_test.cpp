#include <gtest/gtest.h>

#include "hemeroteca/text/normalize.hpp"
#include "hemeroteca/text/tokenizer.hpp"

namespace hemeroteca::text {
namespace {

TEST(Normalize, ComposesAndLowercases) {
    EXPECT_EQ(normalize("INUNDACIÓN"), "inundación");
    EXPECT_EQ(normalize("inundacio\xCC\x81n"), "inundación");
    EXPECT_EQ(shadow_key("Inundación"), "inundacion");
    EXPECT_EQ(strip_accents("pingüino ñandú"), "pinguino nandu");
}

TEST(Normalize, Phrases) {
    EXPECT_EQ(normalize_phrase("  Tormenta,  FUERTE "), "tormenta fuerte");
    EXPECT_EQ(phrase_words("desborde del río"), (std::vector<std::string>{"desborde", "del", "río"}));
}

TEST(Normalize, CharacterClasses) {
    EXPECT_TRUE(is_capitalized("Ángel"));
    EXPECT_FALSE(is_capitalized("ángel"));
    EXPECT_TRUE(is_numeral("1805"));
    EXPECT_FALSE(is_numeral("18a5"));
    EXPECT_EQ(trim("\t hola \n"), "hola");
}

TEST(Tokenizer, SplitsWordsAndPunctuation) {
    const auto toks = scan_tokens("Llovió, ¡mucho!");
    ASSERT_EQ(toks.size(), 5u);
    EXPECT_EQ(toks[0].surface, "Llovió");
    EXPECT_EQ(toks[1].kind, TokenKind::Punct);
    EXPECT_EQ(toks[2].surface, "¡");
    EXPECT_EQ(toks[3].surface, "mucho");
    EXPECT_EQ(toks[3].offset, 11u);
}

TEST(Tokenizer, RejoinsLineBreakHyphens) {
    EXPECT_EQ(normalized_words("La tormen-\nta de ayer"),
              (std::vector<std::string>{"la", "tormenta", "de", "ayer"}));
    EXPECT_EQ(normalized_words("inunda\xC2\xAD" "ción"), (std::vector<std::string>{"inundación"}));
}

TEST(Tokenizer, KeepsInlineHyphenAsPunctuation) {
    EXPECT_EQ(normalized_words("franco-uruguayo"), (std::vector<std::string>{"franco", "uruguayo"}));
}

}  // namespace
}  // namespace hemeroteca::text
