// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file freedyn.hpp
 * @brief Non-interacting observables: two-particle expectation values as sums
 *        over ladder and crossed paths, on-site density variances, the
 *        normalized fluctuation F and its deviation bounds from the DOI.
 */

#pragma once

#include <bosedoi/fock.hpp>
#include <bosedoi/onebody.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace bosedoi {

/**
 * Species-blind two-particle observable
 *   O_2 = sum_{ijkl,s,r} O_ijkl a^dag_{i,s} a^dag_{j,r} a_{k,s} a_{l,r}
 * stored as a dense L^4 array.
 */
class TwoParticleObservable {
public:
    explicit TwoParticleObservable(std::size_t modes)
        : modes_(modes), coeff_(modes * modes * modes * modes, cplx{0.0, 0.0}) {}

    std::size_t modes() const noexcept { return modes_; }

    cplx& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return coeff_[((i * modes_ + j) * modes_ + k) * modes_ + l];
    }
    const cplx& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return coeff_[((i * modes_ + j) * modes_ + k) * modes_ + l];
    }

    const std::vector<cplx>& data() const noexcept { return coeff_; }

    /**
     * Normal-ordered part of N_a N_b, i.e. a single entry O_abab = 1.
     * Since N_a N_b = :N_a N_b: + delta_ab N_a, the coincidence count <N_1 N_2>
     * is this observable with a != b, and the pair counter N_a (N_a - 1) is a = b.
     */
    static TwoParticleObservable density_product(std::size_t modes, std::size_t a, std::size_t b) {
        TwoParticleObservable o(modes);
        o(a, b, a, b) = 1.0;
        return o;
    }

    /// Two-particle part of O_1^2 for a one-particle observable O_1 = sum O_ij a^dag_i a_j.
    static TwoParticleObservable square_of(const Eigen::MatrixXcd& one_body) {
        const auto L = static_cast<std::size_t>(one_body.rows());
        TwoParticleObservable o(L);
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = 0; j < L; ++j)
                for (std::size_t k = 0; k < L; ++k)
                    for (std::size_t l = 0; l < L; ++l) o(i, k, j, l) = one_body(i, j) * one_body(k, l);
        return o;
    }

private:
    std::size_t modes_;
    std::vector<cplx> coeff_;
};

namespace detail {

// Heisenberg-picture coefficients X_{i'j'k'l'} = sum O_ijkl c*_{ii'} c*_{jj'} c_{kk'} c_{ll'},
// done as four successive single-index contractions.
inline std::vector<cplx> heisenberg_transform(const TwoParticleObservable& obs, const Eigen::MatrixXcd& c) {
    const std::size_t L = obs.modes();
    const auto at = [L](std::size_t a, std::size_t b, std::size_t d, std::size_t e) {
        return ((a * L + b) * L + d) * L + e;
    };
    std::vector<cplx> src = obs.data();
    std::vector<cplx> dst(src.size());
    for (int slot = 0; slot < 4; ++slot) {
        std::fill(dst.begin(), dst.end(), cplx{0.0, 0.0});
        const bool conj = slot < 2;
        for (std::size_t a = 0; a < L; ++a)
            for (std::size_t b = 0; b < L; ++b)
                for (std::size_t d = 0; d < L; ++d)
                    for (std::size_t e = 0; e < L; ++e) {
                        const cplx v = src[at(a, b, d, e)];
                        if (v == cplx{0.0, 0.0}) continue;
                        std::size_t idx[4] = {a, b, d, e};
                        const std::size_t old = idx[slot];
                        for (std::size_t x = 0; x < L; ++x) {
                            const cplx f = conj ? std::conj(c(old, x)) : c(old, x);
                            idx[slot] = x;
                            dst[at(idx[0], idx[1], idx[2], idx[3])] += v * f;
                        }
                    }
        std::swap(src, dst);
    }
    return src;
}

inline void require_same_modes(const FockConfiguration& config, std::size_t modes) {
    if (config.modes() != modes) throw Error(Errc::DimensionMismatch, "configuration and model differ in mode count");
}

}  // namespace detail

/**
 * <O_2(t)> in a Fock state: ladder paths C^{mn}_{ijkl} N_m (N_n - delta_mn)
 * plus crossed paths C^{mn}_{jikl} sum_s N_{m,s} N_{n,s} over m != n.
 */
inline double expectation_2po(const FockConfiguration& config, const TwoParticleObservable& obs,
                              const Propagator& prop, double t) {
    detail::require_same_modes(config, prop.modes());
    if (obs.modes() != prop.modes()) throw Error(Errc::DimensionMismatch, "observable and model differ in mode count");
    const std::size_t L = prop.modes();
    const auto x = detail::heisenberg_transform(obs, prop.coefficients(t));
    const auto at = [L](std::size_t a, std::size_t b, std::size_t d, std::size_t e) {
        return ((a * L + b) * L + d) * L + e;
    };
    const auto mult = multiplicity_tables(config);

    cplx sum = 0.0;
    double scale = 0.0;
    for (std::size_t m = 0; m < L; ++m) {
        for (std::size_t n = 0; n < L; ++n) {
            const double ladder = config.mode_total(m) * static_cast<double>(config.mode_total(n) - (m == n ? 1 : 0));
            sum += x[at(m, n, m, n)] * ladder;
            scale += std::abs(x[at(m, n, m, n)] * ladder);
            if (m != n) {
                sum += x[at(n, m, m, n)] * mult.crossed(m, n);
                scale += std::abs(x[at(n, m, m, n)] * mult.crossed(m, n));
            }
        }
    }
    if (std::abs(sum.imag()) > 1e-10 * std::max(1.0, scale))
        throw Error(Errc::NonHermitianInput, "two-particle observable has a complex expectation value");
    return sum.real();
}

/// Variance of N_l(t): sum_{m!=n,s} |c_lm c_ln|^2 N_{m,s} (N_{n,s} + 1).
inline double density_variance(const FockConfiguration& config, const Propagator& prop, std::size_t site, double t) {
    detail::require_same_modes(config, prop.modes());
    if (site >= prop.modes()) throw Error(Errc::InvalidArgument, "site index out of range");
    const Eigen::VectorXcd row = prop.row(site, t);
    const auto mult = multiplicity_tables(config);
    const std::size_t L = prop.modes();
    double v = 0.0;
    for (std::size_t m = 0; m < L; ++m)
        for (std::size_t n = 0; n < L; ++n)
            if (m != n) v += std::norm(row(m)) * std::norm(row(n)) * (mult.crossed(m, n) + config.mode_total(m));
    return v;
}

/// Non-interacting <N_l(t)> = sum_m |c_lm(t)|^2 N_m.
inline double density_expectation(const FockConfiguration& config, const Propagator& prop, std::size_t site, double t) {
    detail::require_same_modes(config, prop.modes());
    const Eigen::VectorXcd row = prop.row(site, t);
    double v = 0.0;
    for (std::size_t m = 0; m < prop.modes(); ++m) v += std::norm(row(m)) * config.mode_total(m);
    return v;
}

struct FluctuationReport {
    std::size_t site = 0;
    double delta_bar = 0.0;  ///< time-averaged variance of N_l
    double delta0 = 0.0;     ///< same density profile, fully distinguishable
    double delta1 = 0.0;     ///< same density profile, single species
    double F = 0.0;
    double I = 0.0;
    double bound_approx = 0.0;
    double bound_rigorous = 0.0;
};

namespace detail {

struct FluctuationSums {
    double crossed = 0.0;  // sum C crossed
    double ladder = 0.0;   // sum C N_m N_n
    double linear = 0.0;   // sum C N_m
};

inline FluctuationSums fluctuation_sums(const FockConfiguration& config, const AveragedCoefficients& avg) {
    require_same_modes(config, static_cast<std::size_t>(avg.table.rows()));
    const auto mult = multiplicity_tables(config);
    FluctuationSums s;
    const auto L = avg.table.rows();
    for (Eigen::Index m = 0; m < L; ++m)
        for (Eigen::Index n = 0; n < L; ++n)
            if (m != n) {
                const double c = avg.table(m, n);
                s.crossed += c * mult.crossed(m, n);
                s.ladder += c * mult.ladder(m, n);
                s.linear += c * config.mode_total(m);
            }
    return s;
}

}  // namespace detail

/**
 * (|F - I| estimate, rigorous bound): (W/mu) min(I, 1-I) and
 * ((max C - min C) / min C) min(I, 1-I), extrema over the m != n entries.
 */
inline std::pair<double, double> fi_deviation_bounds(const FockConfiguration& config, const AveragedCoefficients& avg) {
    detail::require_same_modes(config, static_cast<std::size_t>(avg.table.rows()));
    const double I = doi(config);
    const double gap = std::min(I, 1.0 - I);
    const double lo = avg.min_offdiagonal();
    const double hi = avg.max_offdiagonal();
    const double approx = avg.mu > 0.0 ? avg.W / avg.mu * gap : std::numeric_limits<double>::infinity();
    double rigorous = 0.0;
    if (gap > 0.0) rigorous = lo > 0.0 ? (hi - lo) / lo * gap : std::numeric_limits<double>::infinity();
    return {approx, rigorous};
}

/**
 * Time-averaged density variance at avg.site together with its
 * normalization F = (avg - Delta_0) / (Delta_1 - Delta_0). The references
 * are the crossed -> 0 and crossed -> ladder limits of the same density profile.
 */
inline FluctuationReport normalized_fluctuation(const FockConfiguration& config, const AveragedCoefficients& avg) {
    FluctuationReport r;
    r.site = avg.site;
    r.I = doi(config);
    const auto s = detail::fluctuation_sums(config, avg);
    if (!(s.ladder > 0.0))
        throw Error(Errc::DegenerateNormalization, "Delta_1 equals Delta_0 for this density profile");
    r.delta0 = s.linear;
    r.delta1 = s.ladder + s.linear;
    r.delta_bar = s.crossed + s.linear;
    r.F = s.crossed / s.ladder;
    std::tie(r.bound_approx, r.bound_rigorous) = fi_deviation_bounds(config, avg);
    return r;
}

}  // namespace bosedoi
