#include <gtest/gtest.h>

#include "anosov/lamination.hpp"
#include "anosov/sign_word.hpp"
#include "oracles.hpp"

using namespace anosov;

TEST(SignWord, ParsesAsciiAndUnicodeMinus) {
    EXPECT_EQ(SignWord::parse("+-+").str(), "+-+");
    EXPECT_EQ(SignWord::parse("+\xE2\x88\x92+").str(), "+-+");
    EXPECT_THROW(SignWord::parse("-+"), MalformedInput);
    EXPECT_THROW(SignWord::parse("+x"), MalformedInput);
    EXPECT_THROW(SignWord::parse(""), MalformedInput);
}

TEST(SignWord, PlusSortsBeforeMinus) {
    EXPECT_LT(SignWord::parse("++-"), SignWord::parse("+-+"));
    EXPECT_FALSE(SignWord::parse("+-") < SignWord::parse("++"));
}

TEST(SignWord, CanonicalTypeOfSmallWords) {
    EXPECT_EQ(canonical_type(SignWord::parse("+-")).canonical.str(), "+-");
    EXPECT_EQ(canonical_type(SignWord::parse("+-+")).canonical.str(), "++-");
    EXPECT_TRUE(types_equivalent(SignWord::parse("+--"), SignWord::parse("++-")));
    EXPECT_FALSE(types_equivalent(SignWord::parse("+++"), SignWord::parse("++-")));
    EXPECT_FALSE(types_equivalent(SignWord::parse("++"), SignWord::parse("+++")));
}

TEST(SignWord, CanonicalIsMinimumOfOrbit) {
    for (std::size_t n = 1; n <= 7; ++n)
        for (const auto& w : oracle::all_words(n)) {
            auto orbit = oracle::type_orbit(w);
            EXPECT_EQ(canonical_type(w).canonical.str(), *orbit.begin()) << w.str();
        }
}

TEST(SignWord, TypesEquivalentMatchesOracleExhaustively) {
    for (std::size_t n = 1; n <= 6; ++n) {
        auto words = oracle::all_words(n);
        for (const auto& a : words)
            for (const auto& b : words)
                ASSERT_EQ(types_equivalent(a, b), oracle::types_equivalent(a, b)) << a.str() << " " << b.str();
    }
}

TEST(SignWord, CanonicalWordsCountOrbits) {
    for (std::size_t n = 1; n <= 8; ++n) {
        std::set<std::set<std::string>> orbits;
        for (const auto& w : oracle::all_words(n)) orbits.insert(oracle::type_orbit(w));
        EXPECT_EQ(canonical_words(n).size(), orbits.size()) << n;
    }
}

TEST(SignWord, ReenumerationFromEveryBaseKeepsType) {
    for (const auto& w : oracle::all_words(6))
        for (std::size_t k = 0; k < w.size(); ++k) EXPECT_TRUE(types_equivalent(w, reenumerate(w, k)));
}

TEST(Lamination, SignWordFromLeafFollowsItsOrientation) {
    auto lam = TorusLamination::from_orientations({Sign::Plus, Sign::Minus, Sign::Minus}, true);
    EXPECT_EQ(lam.sign_word_from(0).str(), "+--");
    // leaf 1 points down: read 1, 0, 2
    EXPECT_EQ(lam.sign_word_from(1).str(), "+-+");
    EXPECT_EQ(lam.minority_count(), 1u);
    EXPECT_TRUE(lam.is_filling());
}

TEST(Lamination, AddCompactLeafAppendsToWord) {
    auto lam = zipped_reeb();
    lam = add_compact_leaf(lam, Sign::Minus);
    lam = add_compact_leaf(lam, Sign::Plus);
    EXPECT_EQ(lam.sign_word().str(), "+-+");
    EXPECT_EQ(lam.n_compact(), 3u);
}

TEST(Lamination, BandProfiles) {
    EXPECT_EQ(band_profile(Sign::Plus, Sign::Plus), BandProfile::NegPos);
    EXPECT_EQ(band_profile(Sign::Minus, Sign::Minus), BandProfile::PosNeg);
    EXPECT_EQ(band_profile(Sign::Plus, Sign::Minus), BandProfile::Neg);
    EXPECT_EQ(band_profile(Sign::Minus, Sign::Plus), BandProfile::Pos);
}
