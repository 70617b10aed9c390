// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file onebody.hpp
 * @brief Single-particle hopping models, the propagator c_lm(t) and
 *        infinite-time averages of |c_lm(t) c_ln(t)|^2.
 *
 * Units: hbar = 1, energies in units of the hopping J, times in 1/J.
 */

#pragma once

#include <bosedoi/error.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace bosedoi {

using cplx = std::complex<double>;

/// Single-particle Hamiltonian H_0 = sum_{ij} J_ij a_i^dag a_j (species-blind).
class HoppingModel {
public:
    /// @p energy_scale is the reference hopping J used for tolerances.
    explicit HoppingModel(Eigen::MatrixXcd matrix, double energy_scale = 1.0)
        : matrix_(std::move(matrix)), scale_(energy_scale) {
        if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols())
            throw Error(Errc::DimensionMismatch, "hopping matrix must be square and non-empty");
        if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw Error(Errc::NonHermitianInput, "hopping matrix is not Hermitian");
        if (!(scale_ > 0.0)) scale_ = 1.0;
    }

    std::size_t modes() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    double energy_scale() const noexcept { return scale_; }
    bool is_real() const { return matrix_.imag().cwiseAbs().maxCoeff() == 0.0; }

private:
    Eigen::MatrixXcd matrix_;
    double scale_;
};

/// Nearest-neighbour chain with open (hard-wall) ends: -J off the diagonal, tilt on it.
inline HoppingModel hardwall_chain(std::size_t L, double J, const std::vector<double>& tilt = {}) {
    if (L == 0) throw Error(Errc::InvalidArgument, "chain needs at least one site");
    if (!tilt.empty() && tilt.size() != L) throw Error(Errc::DimensionMismatch, "tilt must list one energy per site");
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(L));
    for (std::size_t i = 0; i + 1 < L; ++i) {
        h(i, i + 1) = -J;
        h(i + 1, i) = -J;
    }
    for (std::size_t i = 0; i < tilt.size(); ++i) h(i, i) = tilt[i];
    return HoppingModel(std::move(h), J != 0.0 ? std::abs(J) : 1.0);
}

/**
 * Cached eigendecomposition H_0 = V diag(E) V^dag, giving
 * c_lm(t) = <l| exp(-i H_0 t) |m> = sum_k V_lk conj(V_mk) exp(-i E_k t).
 * Immutable and safe to share between threads.
 */
class Propagator {
public:
    explicit Propagator(const HoppingModel& model) : scale_(model.energy_scale()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(model.matrix());
        if (solver.info() != Eigen::Success)
            throw Error(Errc::DecompositionFailure, "single-particle eigensolver did not converge");
        energies_ = solver.eigenvalues();
        vectors_ = solver.eigenvectors();
        const Eigen::MatrixXcd rebuilt = vectors_ * energies_.cast<cplx>().asDiagonal() * vectors_.adjoint();
        const double residual = (rebuilt - model.matrix()).cwiseAbs().maxCoeff();
        if (residual > 1e-10 * std::max(1.0, model.matrix().cwiseAbs().maxCoeff()))
            throw Error(Errc::DecompositionFailure, "eigendecomposition does not reproduce the hopping matrix");
    }

    std::size_t modes() const noexcept { return static_cast<std::size_t>(energies_.size()); }
    const Eigen::VectorXd& energies() const noexcept { return energies_; }
    const Eigen::MatrixXcd& eigenvectors() const noexcept { return vectors_; }
    double energy_scale() const noexcept { return scale_; }

    /// Full matrix c(t).
    Eigen::MatrixXcd coefficients(double t) const {
        return vectors_ * phases(t).asDiagonal() * vectors_.adjoint();
    }

    /// Row l of c(t): c_lm(t) for all m.
    Eigen::VectorXcd row(std::size_t l, double t) const {
        const Eigen::VectorXcd weighted = vectors_.row(static_cast<Eigen::Index>(l)).transpose().cwiseProduct(phases(t));
        return vectors_.conjugate() * weighted;
    }

    cplx coefficient(std::size_t l, std::size_t m, double t) const {
        const auto li = static_cast<Eigen::Index>(l);
        const auto mi = static_cast<Eigen::Index>(m);
        cplx sum = 0.0;
        for (Eigen::Index k = 0; k < energies_.size(); ++k)
            sum += vectors_(li, k) * std::conj(vectors_(mi, k)) * std::polar(1.0, -energies_(k) * t);
        return sum;
    }

private:
    Eigen::VectorXcd phases(double t) const {
        Eigen::VectorXcd p(energies_.size());
        for (Eigen::Index k = 0; k < energies_.size(); ++k) p(k) = std::polar(1.0, -energies_(k) * t);
        return p;
    }

    Eigen::VectorXd energies_;
    Eigen::MatrixXcd vectors_;
    double scale_;
};

inline Propagator propagator(const HoppingModel& model) { return Propagator(model); }

/// Time-averaged four-point amplitudes C_mn = avg_t |c_lm(t) c_ln(t)|^2 at a fixed site l.
struct AveragedCoefficients {
    std::size_t site = 0;
    Eigen::MatrixXd table;
    double mu = 0.0;  ///< unweighted mean over m != n
    double W = 0.0;   ///< unweighted (population) standard deviation over m != n

    double min_offdiagonal() const {
        double v = std::numeric_limits<double>::infinity();
        for (Eigen::Index m = 0; m < table.rows(); ++m)
            for (Eigen::Index n = 0; n < table.cols(); ++n)
                if (m != n) v = std::min(v, table(m, n));
        return v;
    }

    double max_offdiagonal() const {
        double v = -std::numeric_limits<double>::infinity();
        for (Eigen::Index m = 0; m < table.rows(); ++m)
            for (Eigen::Index n = 0; n < table.cols(); ++n)
                if (m != n) v = std::max(v, table(m, n));
        return v;
    }
};

namespace detail {

// Labels each element of `values` by a cluster id; sorted neighbours closer
// than `tol` share a cluster.
inline std::vector<std::size_t> cluster_values(const std::vector<double>& values, double tol,
                                               std::size_t* cluster_count = nullptr) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::size_t> label(values.size(), 0);
    std::size_t current = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0 && values[order[i]] - values[order[i - 1]] >= tol) ++current;
        label[order[i]] = current;
    }
    if (cluster_count) *cluster_count = values.empty() ? 0 : current + 1;
    return label;
}

}  // namespace detail

/**
 * Infinite-time average of |c_lm(t) c_ln(t)|^2 for every (m, n).
 *
 * c_lm(t) c_ln(t) = sum_{k,k'} a_k b_k' exp(-i (E_k + E_k') t); frequency sums
 * closer than tol_rel * J are merged, and the average is the sum of squared
 * moduli of the merged amplitudes.
 */
inline AveragedCoefficients averaged_coefficients(const Propagator& prop, std::size_t site,
                                                  double tol_rel = 1e-9) {
    const std::size_t L = prop.modes();
    if (site >= L) throw Error(Errc::InvalidArgument, "site index out of range");
    const auto& E = prop.energies();
    const auto& V = prop.eigenvectors();
    const auto li = static_cast<Eigen::Index>(site);

    std::vector<double> sums(L * L);
    for (std::size_t k = 0; k < L; ++k)
        for (std::size_t q = 0; q < L; ++q) sums[k * L + q] = E(k) + E(q);
    std::size_t groups = 0;
    const auto label = detail::cluster_values(sums, tol_rel * prop.energy_scale(), &groups);

    // amp(k, m) = V_lk conj(V_mk): weight of eigenmode k in c_lm.
    Eigen::MatrixXcd amp(L, L);
    for (std::size_t k = 0; k < L; ++k)
        for (std::size_t m = 0; m < L; ++m) amp(k, m) = V(li, k) * std::conj(V(m, k));

    AveragedCoefficients out;
    out.site = site;
    out.table = Eigen::MatrixXd::Zero(L, L);
    std::vector<cplx> acc(groups);
    for (std::size_t m = 0; m < L; ++m) {
        for (std::size_t n = m; n < L; ++n) {
            std::fill(acc.begin(), acc.end(), cplx{0.0, 0.0});
            for (std::size_t k = 0; k < L; ++k) {
                const cplx a = amp(k, m);
                for (std::size_t q = 0; q < L; ++q) acc[label[k * L + q]] += a * amp(q, n);
            }
            double value = 0.0;
            for (const auto& x : acc) value += std::norm(x);
            out.table(m, n) = value;
            out.table(n, m) = value;
        }
    }

    if (L >= 2) {
        double sum = 0.0;
        double sq = 0.0;
        std::size_t count = 0;
        for (std::size_t m = 0; m < L; ++m)
            for (std::size_t n = 0; n < L; ++n)
                if (m != n) {
                    sum += out.table(m, n);
                    sq += out.table(m, n) * out.table(m, n);
                    ++count;
                }
        out.mu = sum / static_cast<double>(count);
        out.W = std::sqrt(std::max(0.0, sq / static_cast<double>(count) - out.mu * out.mu));
    }
    return out;
}

/// Fits of the coefficient statistics on the hard-wall chain, as functions of L.
inline double fit_mu(double L) { return 1.00 / (L * L) - 1.94 / (L * L * L) + 2.38 / (L * L * L * L); }
inline double fit_W(double L) { return 0.11 / (L * L) + 2.92 / (L * L * L) - 22.50 / (L * L * L * L); }
inline double fit_ratio(double L) { return 0.11 + 3.13 / L - 16.71 / (L * L) - 39.87 / (L * L * L); }

struct CoefficientStats {
    std::size_t L = 0;
    std::size_t site = 0;
    double mu = 0.0;
    double W = 0.0;
    double ratio = 0.0;
    double fit_mu = 0.0;
    double fit_W = 0.0;
    double fit_ratio = 0.0;
};

/// mu_C, W_C and W_C / mu_C for a hard-wall chain of L sites (J = 1) at @p site.
inline CoefficientStats coefficient_stats(std::size_t L, std::size_t site) {
    if (L < 2) throw Error(Errc::InvalidArgument, "coefficient statistics need L >= 2");
    const auto avg = averaged_coefficients(Propagator(hardwall_chain(L, 1.0)), site);
    const double dl = static_cast<double>(L);
    return {L, site, avg.mu, avg.W, avg.W / avg.mu, bosedoi::fit_mu(dl), bosedoi::fit_W(dl), bosedoi::fit_ratio(dl)};
}

}  // namespace bosedoi
