// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

#include <bosedoi/fock.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace bosedoi;

namespace {

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::InvalidArgument;
}

}  // namespace

TEST(MakeConfig, CachesTotals) {
    const auto c = make_config({{4, 0}, {4, 0}});
    EXPECT_EQ(c.total(), 8);
    EXPECT_EQ(c.mode_total(0), 4);
    EXPECT_EQ(c.mode_total(1), 4);
    EXPECT_EQ(c.species_total(0), 8);
    EXPECT_EQ(c.species_total(1), 0);
}

TEST(MakeConfig, RejectsBadInput) {
    EXPECT_EQ(code_of([] { make_config({{-1, 0}, {0, 0}}); }), Errc::NegativeOccupation);
    EXPECT_EQ(code_of([] { make_config({{0, 0}, {0, 0}}); }), Errc::EmptyConfiguration);
    EXPECT_EQ(code_of([] { make_config({{1, 0}, {0}}); }), Errc::DimensionMismatch);
}

TEST(Doi, KnownValues) {
    EXPECT_DOUBLE_EQ(doi(make_config({{4, 0}, {4, 0}})), 1.0);
    EXPECT_DOUBLE_EQ(doi(make_config({{4, 0}, {0, 4}})), 0.0);
    // numerator 2*(3*1 + 1*3) = 12, denominator 2*4*4 = 32
    EXPECT_DOUBLE_EQ(doi(make_config({{3, 1}, {1, 3}})), 0.375);
}

TEST(Doi, SingleModeIsUndefined) {
    const auto c = make_config({{3, 2}, {0, 0}});
    EXPECT_FALSE(doi_defined(c));
    EXPECT_EQ(code_of([&] { doi(c); }), Errc::UndefinedDOI);
}

TEST(Doi, OneSpeciesAcrossModesGivesOne) {
    EXPECT_DOUBLE_EQ(doi(make_config({{0, 2, 0}, {0, 1, 0}, {0, 5, 0}})), 1.0);
}

TEST(Superposition, HomFamily) {
    const auto same = make_config({{1, 0}, {1, 0}});
    const auto diff = make_config({{1, 0}, {0, 1}});
    const SuperposedFock s({{std::sqrt(0.7), same}, {std::sqrt(0.3), diff}});
    EXPECT_NEAR(doi_superposition(s), 0.7, 1e-14);
}

TEST(Superposition, SingleTermAndEqualWeights) {
    const auto c = make_config({{3, 1}, {1, 3}});
    EXPECT_DOUBLE_EQ(doi_superposition(SuperposedFock({{1.0, c}})), doi(c));
    const double w = 1.0 / std::sqrt(2.0);
    const SuperposedFock s({{w, make_config({{4, 0}, {4, 0}})}, {w, make_config({{4, 0}, {0, 4}})}});
    EXPECT_NEAR(doi_superposition(s), 0.5, 1e-15);
}

TEST(Superposition, RejectsMismatchedDensities) {
    const double w = 1.0 / std::sqrt(2.0);
    EXPECT_EQ(code_of([&] { SuperposedFock({{w, make_config({{2, 0}, {1, 0}})}, {w, make_config({{1, 0}, {2, 0}})}}); }),
              Errc::InconsistentDensities);
}

TEST(Superposition, PropagatesUndefinedDoi) {
    const SuperposedFock s({{1.0, make_config({{2, 0}, {0, 0}})}});
    EXPECT_EQ(code_of([&] { doi_superposition(s); }), Errc::UndefinedDOI);
}

TEST(TwoMode, ClosedFormValues) {
    EXPECT_DOUBLE_EQ(two_mode_doi({8, 0, 4, 4}), 1.0);
    EXPECT_DOUBLE_EQ(two_mode_doi({8, 0, 2, 0}), 0.5);
    EXPECT_DOUBLE_EQ(two_mode_doi({8, 0, 4, -4}), 0.0);
    EXPECT_EQ(code_of([] { two_mode_doi({8, 8, 0, 0}); }), Errc::UndefinedDOI);
    EXPECT_EQ(code_of([] { two_mode_doi({8, 1, 0, 0}); }), Errc::InvalidImbalance);
}

TEST(Multiplicity, Tables) {
    auto t = multiplicity_tables(make_config({{1, 0}, {1, 0}}));
    EXPECT_EQ(t.ladder(0, 1), 1.0);
    EXPECT_EQ(t.crossed(0, 1), 1.0);
    t = multiplicity_tables(make_config({{1, 0}, {0, 1}}));
    EXPECT_EQ(t.ladder(0, 1), 1.0);
    EXPECT_EQ(t.crossed(0, 1), 0.0);
    t = multiplicity_tables(make_config({{3, 1}, {1, 3}}));
    EXPECT_EQ(t.crossed(0, 1), 6.0);
    EXPECT_EQ(t.ladder(0, 1), 16.0);
    EXPECT_DOUBLE_EQ(t.eta()(0, 1), 6.0 / 16.0);
}

TEST(Sector, Dimensions) {
    EXPECT_EQ(enumerate_sector(2, {4, 4}).dimension(), 25u);
    EXPECT_EQ(enumerate_sector(3, {1}).dimension(), 3u);
    EXPECT_EQ(enumerate_sector(3, {2, 1}).dimension(), 18u);
}

TEST(Sector, OrderIsSpeciesMajor) {
    const auto b = enumerate_sector(2, {1, 1});
    ASSERT_EQ(b.dimension(), 4u);
    // species 0 is the slow digit
    EXPECT_EQ(b.unrank(0).species_column(0), b.unrank(1).species_column(0));
    EXPECT_NE(b.unrank(1).species_column(0), b.unrank(2).species_column(0));
}

TEST(Sector, RankUnrankRoundTrip) {
    const auto b = enumerate_sector(3, {3, 2});
    std::set<std::vector<int>> distinct;
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        EXPECT_EQ(b.rank(b.unrank(i)), i);
        distinct.insert(b.unrank(i).data());
    }
    EXPECT_EQ(distinct.size(), b.dimension());
}

TEST(Sector, OverflowCap) {
    EXPECT_EQ(code_of([] { SectorBasis(12, {12, 12}, 1000); }), Errc::DimensionOverflow);
}

TEST(Sector, ForeignStateIsRejected) {
    const auto b = enumerate_sector(2, {1, 1});
    EXPECT_FALSE(b.contains(make_config({{2, 0}, {0, 0}})));
}

TEST(Binomial, OverflowDetected) {
    EXPECT_EQ(binomial(10, 3), 120u);
    EXPECT_FALSE(checked_binomial(200, 100).has_value());
}

TEST(DoubleWell, ClassCounts) {
    EXPECT_EQ(nonequivalent_double_well(8, 0).size(), 9u);
    EXPECT_EQ(nonequivalent_double_well(8, 4).size(), 11u);
    EXPECT_EQ(code_of([] { nonequivalent_double_well(8, 3); }), Errc::InvalidImbalance);
}

TEST(DoubleWell, AllParticlesInOneMode) {
    for (const auto& c : nonequivalent_double_well(8, 8)) EXPECT_FALSE(c.doi.has_value());
}

// Orbit count over all L=2, S=2 matrices modulo species and mode exchange.
TEST(DoubleWell, MatchesExhaustiveEnumeration) {
    for (int N : {2, 4, 6, 8}) {
        std::set<std::vector<int>> orbits;
        for (int a = 0; a <= N; ++a)
            for (int b = 0; a + b <= N; ++b)
                for (int c = 0; a + b + c <= N; ++c) {
                    const int d = N - a - b - c;
                    if (a + b != c + d) continue;
                    std::vector<std::vector<int>> images{{a, b, c, d}, {b, a, d, c}, {c, d, a, b}, {d, c, b, a}};
                    orbits.insert(*std::min_element(images.begin(), images.end()));
                }
        EXPECT_EQ(nonequivalent_double_well(N, 0).size(), orbits.size()) << "N=" << N;
    }
    EXPECT_EQ(nonequivalent_double_well(2, 0).size(), 2u);
}

TEST(DoubleWell, ImbalancedMatchesSpeciesSwapOrbits) {
    std::set<std::vector<int>> orbits;
    for (int a = 0; a <= 6; ++a)
        for (int c = 0; c <= 2; ++c) {
            std::vector<int> v{a, 6 - a, c, 2 - c};
            std::vector<int> w{6 - a, a, 2 - c, c};
            orbits.insert(std::min(v, w));
        }
    EXPECT_EQ(nonequivalent_double_well(8, 4).size(), orbits.size());
}

TEST(Canonicalize, OrdersSpeciesByCount) {
    const auto c = canonicalize_species(make_config({{0, 3}, {1, 0}}));
    EXPECT_EQ(c.species_total(0), 3);
    EXPECT_EQ(c.species_total(1), 1);
    EXPECT_DOUBLE_EQ(doi(c), doi(make_config({{0, 3}, {1, 0}})));
}

TEST(TwoSpeciesClasses, TripleWellDistinctAndSorted) {
    const auto classes = nonequivalent_two_species({3, 3, 3}, true);
    ASSERT_FALSE(classes.empty());
    for (std::size_t i = 1; i < classes.size(); ++i)
        EXPECT_LE(classes[i - 1].doi.value_or(-1), classes[i].doi.value_or(-1));
    const auto no_mirror = nonequivalent_two_species({3, 3, 3}, false);
    EXPECT_GT(no_mirror.size(), classes.size());
}
