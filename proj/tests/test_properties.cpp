// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

// Randomized invariants. Every generator is seeded, so failures reproduce.

#include <bosedoi/freedyn.hpp>
#include <bosedoi/harness.hpp>
#include <bosedoi/oracles.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace bosedoi;

namespace {

FockConfiguration random_config(std::mt19937_64& rng, std::size_t L, std::size_t S, int N) {
    while (true) {
        auto c = draw_occupation(rng, L, S, N);
        if (doi_defined(c)) return c;
    }
}

FockConfiguration permuted(const FockConfiguration& c, const std::vector<std::size_t>& modes,
                           const std::vector<std::size_t>& species) {
    std::vector<int> occ(c.modes() * c.species());
    for (std::size_t l = 0; l < c.modes(); ++l)
        for (std::size_t s = 0; s < c.species(); ++s) occ[modes[l] * c.species() + species[s]] = c(l, s);
    return FockConfiguration(c.modes(), c.species(), std::move(occ));
}

std::vector<std::size_t> shuffled(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

}  // namespace

TEST(Properties, DoiBoundedAndPermutationInvariant) {
    std::mt19937_64 rng(20260101);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t L = std::uniform_int_distribution<std::size_t>(2, 12)(rng);
        const std::size_t S = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        const int N = std::uniform_int_distribution<int>(2, 24)(rng);
        const auto c = random_config(rng, L, S, N);
        const double I = doi(c);
        ASSERT_GE(I, 0.0);
        ASSERT_LE(I, 1.0);
        ASSERT_EQ(doi(permuted(c, shuffled(L, rng), shuffled(S, rng))), I);
    }
}

TEST(Properties, TwoModeClosedFormAgrees) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto c = random_config(rng, 2, 2, std::uniform_int_distribution<int>(2, 40)(rng));
        EXPECT_NEAR(two_mode_doi(TwoModeParams::from_config(c)), doi(c), 1e-14);
    }
}

TEST(Properties, SuperpositionMatchesExpectationValues) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t L = 3, S = 2;
        const auto base = random_config(rng, L, S, 6);
        // same density profile: redistribute species within each mode
        std::vector<SuperposedFock::Term> terms;
        double norm = 0.0;
        for (int k = 0; k < 3; ++k) {
            std::vector<std::vector<int>> rows(L, std::vector<int>(S, 0));
            for (std::size_t l = 0; l < L; ++l) {
                const int up = std::uniform_int_distribution<int>(0, base.mode_total(l))(rng);
                rows[l] = {up, base.mode_total(l) - up};
            }
            const std::complex<double> w{g(rng), g(rng)};
            norm += std::norm(w);
            terms.push_back({w, make_config(rows)});
        }
        for (auto& t : terms) t.weight /= std::sqrt(norm);
        const SuperposedFock psi(terms);

        double num = 0.0, den = 0.0;
        for (const auto& t : terms)
            for (std::size_t m = 0; m < L; ++m)
                for (std::size_t n = 0; n < L; ++n) {
                    if (m == n) continue;
                    den += std::norm(t.weight) * t.config.mode_total(m) * t.config.mode_total(n);
                    for (std::size_t s = 0; s < S; ++s) num += std::norm(t.weight) * t.config(m, s) * t.config(n, s);
                }
        EXPECT_NEAR(doi_superposition(psi), num / den, 1e-14);
    }
}

TEST(Properties, SectorRankRoundTrip) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t L = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        std::vector<int> counts(std::uniform_int_distribution<std::size_t>(1, 3)(rng));
        for (auto& n : counts) n = std::uniform_int_distribution<int>(0, 4)(rng);
        counts[0] = std::max(counts[0], 1);
        const SectorBasis b(L, counts);
        for (std::size_t i = 0; i < b.dimension(); ++i) ASSERT_EQ(b.rank(b.unrank(i)), i);
    }
}

TEST(Properties, TwoParticleExpectationMatchesOracle) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    const std::size_t L = 3;
    const auto h = oracle::chain_matrix(L, 1.0, {0.0, 0.4, -0.3});
    const Propagator prop{HoppingModel(h)};
    for (int trial = 0; trial < 12; ++trial) {
        TwoParticleObservable obs(L);
        std::vector<cplx> raw(L * L * L * L);
        for (auto& v : raw) v = {g(rng), g(rng)};
        const auto at = [L](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
            return ((i * L + j) * L + k) * L + l;
        };
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = 0; j < L; ++j)
                for (std::size_t k = 0; k < L; ++k)
                    for (std::size_t l = 0; l < L; ++l)
                        obs(i, j, k, l) = 0.5 * (raw[at(i, j, k, l)] + std::conj(raw[at(l, k, j, i)]));

        const int N = std::uniform_int_distribution<int>(2, 4)(rng);
        const auto cfg = draw_occupation(rng, L, 2, N);
        const double t = std::uniform_real_distribution<double>(0.0, 5.0)(rng);

        const oracle::FockSpace space(L, cfg.species_totals());
        const auto psi = oracle::evolve(space.hamiltonian(h, 0.0), space.basis_vector(cfg.data()), t);
        cplx ref = 0.0;
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = 0; j < L; ++j)
                for (std::size_t k = 0; k < L; ++k)
                    for (std::size_t l = 0; l < L; ++l) ref += obs(i, j, k, l) * space.two_body(psi, i, j, k, l);
        EXPECT_NEAR(ref.imag(), 0.0, 1e-10);
        EXPECT_NEAR(expectation_2po(cfg, obs, prop, t), ref.real(), 1e-9 * std::max(1.0, std::abs(ref)));
    }
}

TEST(Properties, DensityVarianceMatchesOracle) {
    std::mt19937_64 rng(23);
    const std::size_t L = 4;
    const auto h = oracle::chain_matrix(L, 1.0);
    const Propagator prop(hardwall_chain(L, 1.0));
    for (int trial = 0; trial < 10; ++trial) {
        const auto cfg = draw_occupation(rng, L, 2, 3);
        const oracle::FockSpace space(L, cfg.species_totals());
        const double t = std::uniform_real_distribution<double>(0.0, 6.0)(rng);
        const auto psi = oracle::evolve(space.hamiltonian(h, 0.0), space.basis_vector(cfg.data()), t);
        for (std::size_t l = 0; l < L; ++l) {
            const auto [m1, m2] = space.density_moments(psi, l);
            EXPECT_NEAR(density_expectation(cfg, prop, l, t), m1, 1e-10);
            EXPECT_NEAR(density_variance(cfg, prop, l, t), m2 - m1 * m1, 1e-10);
        }
    }
}

TEST(Properties, FInvariantUnderRelabelingAndMirror) {
    std::mt19937_64 rng(29);
    const std::size_t L = 9;
    for (std::size_t site : {0u, 2u}) {
        const Propagator prop(hardwall_chain(L, 1.0));
        const auto avg = averaged_coefficients(prop, site);
        const auto mirror_avg = averaged_coefficients(prop, L - 1 - site);
        std::vector<std::size_t> reverse(L);
        for (std::size_t l = 0; l < L; ++l) reverse[l] = L - 1 - l;
        std::vector<std::size_t> identity_modes(L);
        std::iota(identity_modes.begin(), identity_modes.end(), std::size_t{0});
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t S = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
            const auto c = random_config(rng, L, S, 14);
            const double F = normalized_fluctuation(c, avg).F;
            EXPECT_NEAR(normalized_fluctuation(permuted(c, identity_modes, shuffled(S, rng)), avg).F, F, 1e-12);
            const std::vector<std::size_t> same_species = [&] {
                std::vector<std::size_t> p(S);
                std::iota(p.begin(), p.end(), std::size_t{0});
                return p;
            }();
            EXPECT_NEAR(normalized_fluctuation(permuted(c, reverse, same_species), mirror_avg).F, F, 1e-9);
        }
    }
}

TEST(Properties, FWithinRigorousBound) {
    std::mt19937_64 rng(31);
    for (std::size_t L : {3u, 6u, 10u}) {
        const auto avg = averaged_coefficients(Propagator(hardwall_chain(L, 1.0)), 0);
        for (int trial = 0; trial < 500; ++trial) {
            const auto c = random_config(rng, L, std::uniform_int_distribution<std::size_t>(2, 4)(rng), 2 * static_cast<int>(L));
            const auto r = normalized_fluctuation(c, avg);
            ASSERT_GE(r.F, -1e-12);
            ASSERT_LE(r.F, 1.0 + 1e-12);
            ASSERT_LE(std::abs(r.F - r.I), r.bound_rigorous + 1e-12);
            ASSERT_LE(r.delta0, r.delta_bar + 1e-12);
            ASSERT_LE(r.delta_bar, r.delta1 + 1e-12);
        }
    }
}
