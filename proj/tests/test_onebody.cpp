// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

#include <bosedoi/onebody.hpp>
#include <bosedoi/oracles.hpp>

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace bosedoi;

TEST(HardwallChain, Matrix) {
    const auto h = hardwall_chain(2, 1.0, {0.0, 3.0}).matrix();
    EXPECT_EQ(h(0, 1), cplx(-1.0));
    EXPECT_EQ(h(1, 0), cplx(-1.0));
    EXPECT_EQ(h(1, 1), cplx(3.0));
    const auto h3 = hardwall_chain(3, 1.0).matrix();
    EXPECT_EQ(h3(0, 2), cplx(0.0));
    EXPECT_EQ(h3(1, 2), cplx(-1.0));
}

TEST(HoppingModel, RejectsNonHermitian) {
    Eigen::MatrixXcd h(2, 2);
    h << 0.0, 1.0, 2.0, 0.0;
    EXPECT_THROW(HoppingModel{h}, Error);
}

TEST(Propagator, IdentityAtZero) {
    const Propagator p(hardwall_chain(7, 1.3, {0.1, 0, 0.4, 0, 0, 0.2, 0}));
    EXPECT_LT((p.coefficients(0.0) - Eigen::MatrixXcd::Identity(7, 7)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagator, BeamsplitterTime) {
    const Propagator p(hardwall_chain(2, 1.0));
    EXPECT_NEAR(std::norm(p.coefficient(0, 0, std::numbers::pi / 4)), 0.5, 1e-14);
}

TEST(Propagator, TwoSiteMatchesMatrixExponential) {
    const Propagator p(hardwall_chain(2, 1.0, {0.0, 4.0}));
    for (double t : {0.3, 1.0, 2.7}) {
        const Eigen::MatrixXcd ref = (cplx{0.0, -t} * oracle::chain_matrix(2, 1.0, {0.0, 4.0})).exp();
        EXPECT_LT((p.coefficients(t) - ref).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Propagator, MatchesClosedFormOnTwelveSites) {
    const std::size_t L = 12;
    const Propagator p(hardwall_chain(L, 1.0));
    for (double t : {0.0, 0.5, 1.7, 4.0, 9.3, 25.0}) {
        const auto c = p.coefficients(t);
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t m = 0; m < L; ++m)
                EXPECT_LT(std::abs(c(l, m) - oracle::hardwall_coefficient(L, 1.0, l + 1, m + 1, t)), 1e-10);
    }
}

TEST(Propagator, RowAndEntryAgreeWithMatrix) {
    const Propagator p(hardwall_chain(5, 1.0));
    const auto c = p.coefficients(1.234);
    const auto r = p.row(2, 1.234);
    for (std::size_t m = 0; m < 5; ++m) {
        EXPECT_LT(std::abs(r(m) - c(2, m)), 1e-13);
        EXPECT_LT(std::abs(p.coefficient(2, m, 1.234) - c(2, m)), 1e-13);
    }
}

TEST(Averaged, TwoSiteAnalytic) {
    const auto avg = averaged_coefficients(Propagator(hardwall_chain(2, 1.0)), 0);
    EXPECT_NEAR(avg.table(0, 1), 0.125, 1e-14);
    EXPECT_NEAR(avg.mu, 0.125, 1e-14);
    EXPECT_NEAR(avg.W, 0.0, 1e-14);
}

TEST(Averaged, SymmetricAndBounded) {
    const auto avg = averaged_coefficients(Propagator(hardwall_chain(9, 1.0)), 3);
    EXPECT_LT((avg.table - avg.table.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_GE(avg.table.minCoeff(), 0.0);
    EXPECT_LE(avg.table.maxCoeff(), 1.0);
    EXPECT_GT(avg.mu, 0.0);
}

// Trapezoid over T = 1e4 / J with 1e6 intervals, propagator from the closed form.
TEST(Averaged, MatchesLongWindowQuadrature) {
    const std::size_t L = 5;
    const std::size_t site = 1;
    const auto avg = averaged_coefficients(Propagator(hardwall_chain(L, 1.0)), site);
    const double T = 1e4;
    const std::size_t steps = 1000000;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(L, L);
    Eigen::VectorXd row(L);
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = T * static_cast<double>(k) / static_cast<double>(steps);
        for (std::size_t m = 0; m < L; ++m) row(m) = std::norm(oracle::hardwall_coefficient(L, 1.0, site + 1, m + 1, t));
        acc += (k == 0 || k == steps ? 0.5 : 1.0) * row * row.transpose();
    }
    acc /= static_cast<double>(steps);
    for (std::size_t m = 0; m < L; ++m)
        for (std::size_t n = 0; n < L; ++n) EXPECT_NEAR(avg.table(m, n) / acc(m, n), 1.0, 1e-3) << m << "," << n;
}

TEST(CoefficientStats, MuMatchesFitAtTwelve) {
    const auto s = coefficient_stats(12, 0);
    EXPECT_NEAR(s.mu / s.fit_mu, 1.0, 0.05);
}

TEST(CoefficientStats, MuIndependentOfSite) {
    double lo = 1e300, hi = 0.0;
    for (std::size_t l = 0; l < 10; ++l) {
        const double mu = coefficient_stats(10, l).mu;
        lo = std::min(lo, mu);
        hi = std::max(hi, mu);
    }
    EXPECT_LT((hi - lo) / lo, 1e-10);
}

TEST(CoefficientStats, MirrorSiteElevatesSpread) {
    // l = 5 is the centre of L = 9 but not of L = 8 or 10.
    const double w9 = coefficient_stats(9, 4).W;
    EXPECT_GT(w9, 1.5 * coefficient_stats(8, 4).W);
    EXPECT_GT(w9, 1.5 * coefficient_stats(10, 4).W);
}

TEST(CoefficientStats, RatioDecreasesWithL) {
    EXPECT_LT(coefficient_stats(40, 0).ratio, coefficient_stats(10, 0).ratio);
}

TEST(Propagator, UnitaryAtRandomTimes) {
    const Propagator p(hardwall_chain(8, 1.0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 100.0);
    for (int k = 0; k < 20; ++k) {
        const auto c = p.coefficients(dist(rng));
        for (Eigen::Index l = 0; l < 8; ++l) EXPECT_NEAR(c.row(l).squaredNorm(), 1.0, 1e-10);
    }
}

TEST(Propagator, MirrorSymmetry) {
    const std::size_t L = 7;
    const Propagator p(hardwall_chain(L, 1.0));
    const auto c = p.coefficients(3.3);
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t m = 0; m < L; ++m) EXPECT_LT(std::abs(c(l, m) - c(L - 1 - l, L - 1 - m)), 1e-12);
}
