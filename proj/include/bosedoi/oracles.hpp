// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file oracles.hpp
 * @brief Slow reference implementations used to cross-check the library.
 *
 * Nothing here shares code with the production paths: the Fock space is
 * enumerated by recursion into a map, operators are applied one basis state
 * at a time, and time evolution uses a dense matrix exponential instead of an
 * eigendecomposition.
 */

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bosedoi::oracle {

using cplx = std::complex<double>;

/// All occupation matrices (row-major L x S) with fixed per-species totals.
class FockSpace {
public:
    FockSpace(std::size_t L, std::vector<int> counts) : L_(L), counts_(std::move(counts)) {
        std::vector<int> occ(L_ * counts_.size(), 0);
        fill(occ, 0, 0, counts_.empty() ? 0 : counts_[0]);
        for (std::size_t i = 0; i < states_.size(); ++i) index_[states_[i]] = i;
    }

    std::size_t modes() const { return L_; }
    std::size_t species() const { return counts_.size(); }
    std::size_t size() const { return states_.size(); }
    const std::vector<int>& state(std::size_t i) const { return states_[i]; }

    std::size_t index(const std::vector<int>& occ) const {
        auto it = index_.find(occ);
        if (it == index_.end()) throw std::out_of_range("state outside the oracle space");
        return it->second;
    }

    Eigen::VectorXcd basis_vector(const std::vector<int>& occ) const {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size()));
        v(static_cast<Eigen::Index>(index(occ))) = 1.0;
        return v;
    }

    /// Mode occupations N_l of basis state i.
    int mode_total(std::size_t i, std::size_t l) const {
        int n = 0;
        for (std::size_t s = 0; s < species(); ++s) n += states_[i][l * species() + s];
        return n;
    }

    /// Dense matrix of sum_ij h_ij sum_s a^dag_is a_js + (U/2) sum_l n_l (n_l - 1).
    Eigen::MatrixXcd hamiltonian(const Eigen::MatrixXcd& h, double U) const {
        const auto d = static_cast<Eigen::Index>(size());
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
        const std::size_t S = species();
        for (std::size_t col = 0; col < size(); ++col) {
            for (std::size_t i = 0; i < L_; ++i)
                for (std::size_t j = 0; j < L_; ++j) {
                    if (h(i, j) == cplx{0.0, 0.0}) continue;
                    for (std::size_t s = 0; s < S; ++s) {
                        auto occ = states_[col];
                        double amp = 1.0;
                        if (occ[j * S + s] == 0) continue;
                        amp *= std::sqrt(static_cast<double>(occ[j * S + s]));
                        --occ[j * S + s];
                        ++occ[i * S + s];
                        amp *= std::sqrt(static_cast<double>(occ[i * S + s]));
                        H(static_cast<Eigen::Index>(index(occ)), static_cast<Eigen::Index>(col)) += h(i, j) * amp;
                    }
                }
            for (std::size_t l = 0; l < L_; ++l) {
                const double n = mode_total(col, l);
                H(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) += 0.5 * U * n * (n - 1.0);
            }
        }
        return H;
    }

    /// <psi| a^dag_{i,s} a^dag_{j,r} a_{k,s} a_{l,r} |psi> summed over s, r.
    cplx two_body(const Eigen::VectorXcd& psi, std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        const std::size_t S = species();
        cplx sum = 0.0;
        for (std::size_t col = 0; col < size(); ++col) {
            if (psi(static_cast<Eigen::Index>(col)) == cplx{0.0, 0.0}) continue;
            for (std::size_t s = 0; s < S; ++s)
                for (std::size_t r = 0; r < S; ++r) {
                    auto occ = states_[col];
                    double amp = 1.0;
                    // rightmost operator first
                    auto lower = [&](std::size_t mode, std::size_t sp) {
                        int& n = occ[mode * S + sp];
                        if (n == 0) return false;
                        amp *= std::sqrt(static_cast<double>(n));
                        --n;
                        return true;
                    };
                    auto raise = [&](std::size_t mode, std::size_t sp) {
                        int& n = occ[mode * S + sp];
                        ++n;
                        amp *= std::sqrt(static_cast<double>(n));
                    };
                    if (!lower(l, r) || !lower(k, s)) continue;
                    raise(j, r);
                    raise(i, s);
                    sum += std::conj(psi(static_cast<Eigen::Index>(index(occ)))) * amp *
                           psi(static_cast<Eigen::Index>(col));
                }
        }
        return sum;
    }

    /// <N_l> and <N_l^2>.
    std::pair<double, double> density_moments(const Eigen::VectorXcd& psi, std::size_t l) const {
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < size(); ++i) {
            const double p = std::norm(psi(static_cast<Eigen::Index>(i)));
            const double n = mode_total(i, l);
            m1 += p * n;
            m2 += p * n * n;
        }
        return {m1, m2};
    }

private:
    void fill(std::vector<int>& occ, std::size_t s, std::size_t l, int left) {
        const std::size_t S = counts_.size();
        if (s == S) {
            states_.push_back(occ);
            return;
        }
        if (l + 1 == L_) {
            occ[l * S + s] = left;
            fill(occ, s + 1, 0, s + 1 < S ? counts_[s + 1] : 0);
            occ[l * S + s] = 0;
            return;
        }
        for (int n = 0; n <= left; ++n) {
            occ[l * S + s] = n;
            fill(occ, s, l + 1, left - n);
        }
        occ[l * S + s] = 0;
    }

    std::size_t L_;
    std::vector<int> counts_;
    std::vector<std::vector<int>> states_;
    std::map<std::vector<int>, std::size_t> index_;
};

/// exp(-i H t) psi by dense matrix exponential.
inline Eigen::VectorXcd evolve(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& psi, double t) {
    const Eigen::MatrixXcd generator = cplx{0.0, -t} * H;
    const Eigen::MatrixXcd U = generator.exp();
    return U * psi;
}

/// Nearest-neighbour chain, open ends: -J off the diagonal, no tilt.
inline Eigen::MatrixXcd chain_matrix(std::size_t L, double J, const std::vector<double>& tilt = {}) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(L));
    for (std::size_t i = 0; i + 1 < L; ++i) h(i, i + 1) = h(i + 1, i) = -J;
    for (std::size_t i = 0; i < tilt.size(); ++i) h(i, i) = tilt[i];
    return h;
}

/// Closed-form hard-wall propagator, 1-based l and m.
inline cplx hardwall_coefficient(std::size_t L, double J, std::size_t l, std::size_t m, double t) {
    const double q = std::numbers::pi / static_cast<double>(L + 1);
    cplx sum = 0.0;
    for (std::size_t k = 1; k <= L; ++k)
        sum += std::sin(q * k * l) * std::sin(q * k * m) * std::polar(1.0, 2.0 * J * t * std::cos(q * k));
    return 2.0 * sum / static_cast<double>(L + 1);
}

/// (1/T) int_0^T f(t) dt by the trapezoid rule on @p steps intervals.
inline double time_average(const std::function<double(double)>& f, double T, std::size_t steps) {
    const double h = T / static_cast<double>(steps);
    double sum = 0.5 * (f(0.0) + f(T));
    for (std::size_t i = 1; i < steps; ++i) sum += f(h * static_cast<double>(i));
    return sum * h / T;
}

/// Variance of N_l sampled on a uniform grid by repeated application of exp(-i H dt).
inline std::vector<double> variance_series(const FockSpace& space, const Eigen::MatrixXcd& H,
                                           const Eigen::VectorXcd& psi0, std::size_t l, double dt,
                                           std::size_t steps) {
    const Eigen::MatrixXcd generator = cplx{0.0, -dt} * H;
    const Eigen::MatrixXcd step = generator.exp();
    std::vector<double> out;
    out.reserve(steps + 1);
    Eigen::VectorXcd psi = psi0;
    for (std::size_t i = 0; i <= steps; ++i) {
        const auto [m1, m2] = space.density_moments(psi, l);
        out.push_back(m2 - m1 * m1);
        psi = step * psi;
    }
    return out;
}

}  // namespace bosedoi::oracle
