// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file manybody.hpp
 * @brief Species-blind interacting Bose-Hubbard dynamics in a fixed
 *        per-species particle-number sector: Hamiltonian construction, dense
 *        exact diagonalization, spectral time evolution and time averages,
 *        first-order perturbation theory in U, and the bipartite U -> -U symmetry.
 */

#pragma once

#include <bosedoi/error.hpp>
#include <bosedoi/fock.hpp>
#include <bosedoi/onebody.hpp>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <optional>
#include <queue>
#include <vector>

namespace bosedoi {

using SparseMatrixXcd = Eigen::SparseMatrix<cplx>;

/**
 * Two-body interaction V = sum V_ijkl a^dag_{i,s} a^dag_{j,r} a_{k,s} a_{l,r}.
 * The default is contact: V_ijkl = (U/2) delta_ij delta_jk delta_kl.
 */
class InteractionModel {
public:
    static InteractionModel contact(double U) { return InteractionModel(U, {}, 0); }

    /// General coefficients, row-major over (i, j, k, l). Must satisfy V_klij = conj(V_ijkl).
    static InteractionModel general(std::size_t modes, std::vector<cplx> coefficients) {
        if (coefficients.size() != modes * modes * modes * modes)
            throw Error(Errc::DimensionMismatch, "interaction array must have L^4 entries");
        const auto at = [modes](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
            return ((i * modes + j) * modes + k) * modes + l;
        };
        for (std::size_t i = 0; i < modes; ++i)
            for (std::size_t j = 0; j < modes; ++j)
                for (std::size_t k = 0; k < modes; ++k)
                    for (std::size_t l = 0; l < modes; ++l)
                        if (std::abs(coefficients[at(k, l, i, j)] - std::conj(coefficients[at(i, j, k, l)])) > 1e-12)
                            throw Error(Errc::NonHermitianInput, "interaction coefficients are not Hermitian");
        return InteractionModel(0.0, std::move(coefficients), modes);
    }

    bool is_contact() const noexcept { return coeff_.empty(); }
    double U() const noexcept { return U_; }
    std::size_t modes() const noexcept { return modes_; }
    const std::vector<cplx>& coefficients() const noexcept { return coeff_; }

private:
    InteractionModel(double U, std::vector<cplx> coeff, std::size_t modes)
        : U_(U), coeff_(std::move(coeff)), modes_(modes) {}

    double U_;
    std::vector<cplx> coeff_;
    std::size_t modes_;
};

/// Sparse operator on a sector basis. Immutable; the basis is shared.
struct ManyBodyOperator {
    std::shared_ptr<const SectorBasis> basis;
    SparseMatrixXcd matrix;
    double energy_scale = 1.0;
};

namespace detail {

// a_{mode,s} applied to a row-major occupation vector; returns false on a vacuum hit.
inline bool annihilate(std::vector<int>& occ, std::size_t S, std::size_t mode, std::size_t s, double& amp) {
    int& n = occ[mode * S + s];
    if (n == 0) return false;
    amp *= std::sqrt(static_cast<double>(n));
    --n;
    return true;
}

inline void create(std::vector<int>& occ, std::size_t S, std::size_t mode, std::size_t s, double& amp) {
    int& n = occ[mode * S + s];
    ++n;
    amp *= std::sqrt(static_cast<double>(n));
}

inline std::size_t rank_flat(const SectorBasis& basis, const std::vector<int>& occ) {
    return basis.rank(FockConfiguration(basis.modes(), basis.species(), occ));
}

inline void require_basis(const std::shared_ptr<const SectorBasis>& basis) {
    if (!basis) throw Error(Errc::InvalidArgument, "operator has no basis");
}

inline bool same_basis(const std::shared_ptr<const SectorBasis>& a, const std::shared_ptr<const SectorBasis>& b) {
    return a && b && (a == b || *a == *b);
}

}  // namespace detail

/// Species-blind one-body operator sum_{ij,s} O_ij a^dag_{i,s} a_{j,s}.
inline ManyBodyOperator one_body_operator(std::shared_ptr<const SectorBasis> basis, const Eigen::MatrixXcd& coeff) {
    detail::require_basis(basis);
    const std::size_t L = basis->modes();
    const std::size_t S = basis->species();
    if (static_cast<std::size_t>(coeff.rows()) != L || static_cast<std::size_t>(coeff.cols()) != L)
        throw Error(Errc::DimensionMismatch, "one-body coefficients must be L x L");
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (std::size_t col = 0; col < basis->dimension(); ++col) {
        const auto& src = basis->unrank(col).data();
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t i = 0; i < L; ++i) {
                for (std::size_t j = 0; j < L; ++j) {
                    const cplx o = coeff(i, j);
                    if (o == cplx{0.0, 0.0}) continue;
                    if (i == j) {
                        if (src[i * S + s] != 0) triplets.emplace_back(col, col, o * static_cast<double>(src[i * S + s]));
                        continue;
                    }
                    auto occ = src;
                    double amp = 1.0;
                    if (!detail::annihilate(occ, S, j, s, amp)) continue;
                    detail::create(occ, S, i, s, amp);
                    triplets.emplace_back(detail::rank_flat(*basis, occ), col, o * amp);
                }
            }
        }
    }
    ManyBodyOperator op{basis, SparseMatrixXcd(basis->dimension(), basis->dimension()), 1.0};
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return op;
}

/// Diagonal N_l.
inline ManyBodyOperator density_operator(std::shared_ptr<const SectorBasis> basis, std::size_t site) {
    detail::require_basis(basis);
    if (site >= basis->modes()) throw Error(Errc::InvalidArgument, "site index out of range");
    Eigen::MatrixXcd coeff = Eigen::MatrixXcd::Zero(basis->modes(), basis->modes());
    coeff(site, site) = 1.0;
    return one_body_operator(std::move(basis), coeff);
}

/// Diagonal N_s (number of particles of species s), used for conservation checks.
inline ManyBodyOperator species_number_operator(std::shared_ptr<const SectorBasis> basis, std::size_t species) {
    detail::require_basis(basis);
    if (species >= basis->species()) throw Error(Errc::InvalidArgument, "species index out of range");
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (std::size_t i = 0; i < basis->dimension(); ++i)
        triplets.emplace_back(i, i, static_cast<double>(basis->unrank(i).species_total(species)));
    ManyBodyOperator op{basis, SparseMatrixXcd(basis->dimension(), basis->dimension()), 1.0};
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return op;
}

/**
 * H = H_0 + V in the given sector. The same J_ij and U act on every species,
 * so H conserves each species' particle number.
 */
inline ManyBodyOperator build_hamiltonian(const HoppingModel& hop, const InteractionModel& inter,
                                          std::shared_ptr<const SectorBasis> basis) {
    detail::require_basis(basis);
    const std::size_t L = basis->modes();
    const std::size_t S = basis->species();
    if (hop.modes() != L) throw Error(Errc::DimensionMismatch, "hopping model and basis differ in mode count");
    if (!inter.is_contact() && inter.modes() != L)
        throw Error(Errc::DimensionMismatch, "interaction and basis differ in mode count");

    ManyBodyOperator H = one_body_operator(basis, hop.matrix());
    H.energy_scale = hop.energy_scale();

    std::vector<Eigen::Triplet<cplx>> triplets;
    const auto& V = inter.coefficients();
    for (std::size_t col = 0; col < basis->dimension(); ++col) {
        const auto& cfg = basis->unrank(col);
        if (inter.is_contact()) {
            double e = 0.0;
            for (std::size_t l = 0; l < L; ++l) e += 0.5 * inter.U() * cfg.mode_total(l) * (cfg.mode_total(l) - 1.0);
            if (e != 0.0) triplets.emplace_back(col, col, e);
            continue;
        }
        const auto& src = cfg.data();
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = 0; j < L; ++j)
                for (std::size_t k = 0; k < L; ++k)
                    for (std::size_t l = 0; l < L; ++l) {
                        const cplx v = V[((i * L + j) * L + k) * L + l];
                        if (v == cplx{0.0, 0.0}) continue;
                        for (std::size_t s = 0; s < S; ++s)
                            for (std::size_t r = 0; r < S; ++r) {
                                auto occ = src;
                                double amp = 1.0;
                                if (!detail::annihilate(occ, S, l, r, amp)) continue;
                                if (!detail::annihilate(occ, S, k, s, amp)) continue;
                                detail::create(occ, S, j, r, amp);
                                detail::create(occ, S, i, s, amp);
                                triplets.emplace_back(detail::rank_flat(*basis, occ), col, v * amp);
                            }
                    }
    }
    SparseMatrixXcd interaction(basis->dimension(), basis->dimension());
    interaction.setFromTriplets(triplets.begin(), triplets.end());
    H.matrix += interaction;
    H.matrix.makeCompressed();

    const SparseMatrixXcd diff = SparseMatrixXcd(H.matrix.adjoint()) - H.matrix;
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrixXcd::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    if (worst > 1e-12) throw Error(Errc::NonHermitianInput, "many-body Hamiltonian is not Hermitian");
    return H;
}

/// Energies (ascending) and orthonormal eigenvectors of a sector Hamiltonian.
struct Eigensystem {
    std::shared_ptr<const SectorBasis> basis;
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;
    double energy_scale = 1.0;
};

inline constexpr std::size_t default_dense_cap = 5000;

/**
 * Dense diagonalization. Each eigenvector's phase is fixed so that its first
 * component with modulus above 1e-12 is real and positive.
 */
inline Eigensystem diagonalize(const ManyBodyOperator& H, std::size_t dense_cap = default_dense_cap) {
    detail::require_basis(H.basis);
    const auto dim = static_cast<std::size_t>(H.matrix.rows());
    if (dim > dense_cap)
        throw Error(Errc::DimensionOverflow, "sector dimension " + std::to_string(dim) + " exceeds dense cap");
    const Eigen::MatrixXcd dense(H.matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
    if (solver.info() != Eigen::Success) throw Error(Errc::ConvergenceFailure, "dense eigensolver did not converge");

    Eigensystem sys{H.basis, solver.eigenvalues(), solver.eigenvectors(), H.energy_scale};
    for (Eigen::Index j = 0; j < sys.vectors.cols(); ++j) {
        for (Eigen::Index i = 0; i < sys.vectors.rows(); ++i) {
            const cplx z = sys.vectors(i, j);
            if (std::abs(z) > 1e-12) {
                sys.vectors.col(j) *= std::conj(z) / std::abs(z);
                break;
            }
        }
    }
    const double norm = std::max(1.0, dense.cwiseAbs().maxCoeff());
    const Eigen::MatrixXcd residual = dense * sys.vectors - sys.vectors * sys.energies.cast<cplx>().asDiagonal();
    if (dim > 0 && residual.colwise().norm().maxCoeff() > 1e-8 * norm * std::sqrt(static_cast<double>(dim)))
        throw Error(Errc::ConvergenceFailure, "eigenpairs fail the residual check");
    return sys;
}

/// Eigensystem plus the weights c_j = <E_j|Psi(0)> of one initial state.
struct SpectralDecomposition {
    std::shared_ptr<const Eigensystem> system;
    Eigen::VectorXcd weights;
};

inline SpectralDecomposition spectral_decomposition(std::shared_ptr<const Eigensystem> system,
                                                    const Eigen::VectorXcd& initial) {
    if (!system) throw Error(Errc::InvalidArgument, "missing eigensystem");
    if (initial.size() != system->vectors.rows()) throw Error(Errc::BasisMismatch, "initial state has wrong dimension");
    if (std::abs(initial.squaredNorm() - 1.0) > 1e-10) throw Error(Errc::InvalidArgument, "initial state is not normalized");
    return {system, system->vectors.adjoint() * initial};
}

inline SpectralDecomposition spectral_decomposition(std::shared_ptr<const Eigensystem> system,
                                                    const FockConfiguration& initial) {
    if (!system) throw Error(Errc::InvalidArgument, "missing eigensystem");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(system->vectors.rows());
    psi(static_cast<Eigen::Index>(system->basis->rank(initial))) = 1.0;
    return spectral_decomposition(std::move(system), psi);
}

struct Moments {
    double mean = 0.0;    ///< <O(t)>
    double second = 0.0;  ///< <O(t)^2>
    double variance() const { return second - mean * mean; }
};

namespace detail {

inline Eigen::MatrixXcd to_eigenbasis(const SpectralDecomposition& spec, const ManyBodyOperator& obs) {
    if (!same_basis(spec.system->basis, obs.basis)) throw Error(Errc::BasisMismatch, "observable lives in another sector");
    const auto& V = spec.system->vectors;
    return V.adjoint() * (obs.matrix * V);
}

}  // namespace detail

/// <O(t)> and <O(t)^2> for each requested time.
inline std::vector<Moments> evolve_observable(const SpectralDecomposition& spec, const ManyBodyOperator& obs,
                                              const std::vector<double>& times) {
    const Eigen::MatrixXcd oe = detail::to_eigenbasis(spec, obs);
    const auto& E = spec.system->energies;
    std::vector<Moments> out;
    out.reserve(times.size());
    Eigen::VectorXcd a(E.size());
    for (double t : times) {
        for (Eigen::Index j = 0; j < E.size(); ++j) a(j) = spec.weights(j) * std::polar(1.0, -E(j) * t);
        const Eigen::VectorXcd y = oe * a;
        out.push_back({a.dot(y).real(), y.squaredNorm()});
    }
    return out;
}

/**
 * Infinite-time average of Var O(t) with energy and gap degeneracies grouped:
 *
 *   sum_{E_j ~ E_k} c*_j c_k (O^2)_jk - sum_w |sum_{E_j - E_k ~ w} c*_j O_jk c_k|^2.
 *
 * Without degeneracies this is the familiar three-term expression
 * sum_j |c_j|^2 (O^2)_jj - (sum_j |c_j|^2 O_jj)^2 - sum_{j!=k} |c_j|^2 |c_k|^2 |O_jk|^2.
 */
inline double time_avg_variance(const SpectralDecomposition& spec, const ManyBodyOperator& obs, double tol_rel = 1e-9) {
    const Eigen::MatrixXcd oe = detail::to_eigenbasis(spec, obs);
    const auto& E = spec.system->energies;
    const auto dim = static_cast<std::size_t>(E.size());
    const double tol = tol_rel * spec.system->energy_scale;

    std::vector<double> energies(E.data(), E.data() + dim);
    std::size_t nlev = 0;
    const auto level = detail::cluster_values(energies, tol, &nlev);
    std::vector<double> level_energy(nlev, 0.0);
    std::vector<std::size_t> level_size(nlev, 0);
    for (std::size_t j = 0; j < dim; ++j) {
        level_energy[level[j]] += energies[j];
        ++level_size[level[j]];
    }
    for (std::size_t a = 0; a < nlev; ++a) level_energy[a] /= static_cast<double>(level_size[a]);

    // Z(r, a) = sum_{k in level a} O_rk c_k
    Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(nlev));
    for (std::size_t k = 0; k < dim; ++k) Z.col(level[k]) += oe.col(k) * spec.weights(k);
    const double stationary = Z.squaredNorm();

    // B(a, b) = sum_{j in a} conj(c_j) Z(j, b)
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(nlev), static_cast<Eigen::Index>(nlev));
    for (std::size_t j = 0; j < dim; ++j) B.row(level[j]) += std::conj(spec.weights(j)) * Z.row(j);

    std::vector<double> gaps(nlev * nlev);
    for (std::size_t a = 0; a < nlev; ++a)
        for (std::size_t b = 0; b < nlev; ++b) gaps[a * nlev + b] = level_energy[a] - level_energy[b];
    std::size_t ngaps = 0;
    const auto gap_label = detail::cluster_values(gaps, tol, &ngaps);
    std::vector<cplx> amp(ngaps, cplx{0.0, 0.0});
    for (std::size_t a = 0; a < nlev; ++a)
        for (std::size_t b = 0; b < nlev; ++b) amp[gap_label[a * nlev + b]] += B(a, b);
    double oscillating = 0.0;
    for (const auto& x : amp) oscillating += std::norm(x);
    return stationary - oscillating;
}

/// The three-term formula taken literally (no degeneracy grouping).
inline double time_avg_variance_nondegenerate(const SpectralDecomposition& spec, const ManyBodyOperator& obs) {
    const Eigen::MatrixXcd oe = detail::to_eigenbasis(spec, obs);
    const Eigen::VectorXd p = spec.weights.cwiseAbs2();
    const Eigen::MatrixXcd o2 = oe * oe;
    double first = 0.0;
    double mean = 0.0;
    double cross = 0.0;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        first += p(j) * o2(j, j).real();
        mean += p(j) * oe(j, j).real();
        for (Eigen::Index k = 0; k < p.size(); ++k)
            if (j != k) cross += p(j) * p(k) * std::norm(oe(j, k));
    }
    return first - mean * mean - cross;
}

// ---------------------------------------------------------------------------
// First-order perturbation theory in U (contact interaction)
// ---------------------------------------------------------------------------

struct QuadratureOptions {
    std::size_t initial_panels = 4;  ///< 16-point Gauss-Legendre per panel: 64 nodes
    std::size_t max_panels = 4096;
    double abs_tol = 1e-9;
};

/**
 * Interaction-dressed two-particle amplitudes at time t,
 *
 *   D^{mn}_{op}(t) = conj(c_om(t)) (1/t) int_0^t sum_s |c_sn(t')|^2 c_ps(t-t') c_sm(t') dt'.
 *
 * The integral K(m, n, p) does not depend on o and is stored on its own.
 */
class PerturbationKernel {
public:
    PerturbationKernel(const Propagator& prop, double t, QuadratureOptions opts = {})
        : modes_(prop.modes()), t_(t), ct_(prop.coefficients(t)) {
        if (!(t > 0.0)) throw Error(Errc::InvalidArgument, "perturbation kernel needs t > 0");
        std::size_t panels = opts.initial_panels;
        auto current = integrate(prop, panels);
        while (true) {
            if (panels * 2 > opts.max_panels)
                throw Error(Errc::QuadratureNonConvergence, "D-coefficient quadrature did not converge");
            auto refined = integrate(prop, panels * 2);
            double change = 0.0;
            for (std::size_t i = 0; i < refined.size(); ++i) change = std::max(change, std::abs(refined[i] - current[i]));
            panels *= 2;
            current = std::move(refined);
            if (change < opts.abs_tol) {
                change_ = change;
                break;
            }
        }
        panels_ = panels;
        kernel_ = std::move(current);
    }

    std::size_t modes() const noexcept { return modes_; }
    double time() const noexcept { return t_; }
    std::size_t panels() const noexcept { return panels_; }
    std::size_t nodes() const noexcept { return panels_ * 16; }
    double last_change() const noexcept { return change_; }

    cplx D(std::size_t m, std::size_t n, std::size_t o, std::size_t p) const {
        return std::conj(ct_(o, m)) * kernel_[(m * modes_ + n) * modes_ + p];
    }

private:
    std::vector<cplx> integrate(const Propagator& prop, std::size_t panels) const {
        using rule = boost::math::quadrature::gauss<double, 16>;
        const auto& half_nodes = rule::abscissa();
        const auto& half_weights = rule::weights();
        const std::size_t L = modes_;
        std::vector<cplx> acc(L * L * L, cplx{0.0, 0.0});
        const double width = t_ / static_cast<double>(panels);
        for (std::size_t panel = 0; panel < panels; ++panel) {
            const double mid = (static_cast<double>(panel) + 0.5) * width;
            for (std::size_t q = 0; q < half_nodes.size(); ++q) {
                for (int sign : {-1, 1}) {
                    if (half_nodes[q] == 0.0 && sign < 0) continue;
                    const double tp = mid + sign * 0.5 * width * half_nodes[q];
                    const double w = 0.5 * width * half_weights[q];
                    const Eigen::MatrixXcd early = prop.coefficients(tp);
                    const Eigen::MatrixXcd late = prop.coefficients(t_ - tp);
                    for (std::size_t m = 0; m < L; ++m)
                        for (std::size_t n = 0; n < L; ++n)
                            for (std::size_t p = 0; p < L; ++p) {
                                cplx sum = 0.0;
                                for (std::size_t s = 0; s < L; ++s)
                                    sum += std::norm(early(s, n)) * late(p, s) * early(s, m);
                                acc[(m * L + n) * L + p] += w * sum;
                            }
                }
            }
        }
        for (auto& x : acc) x /= t_;
        return acc;
    }

    std::size_t modes_;
    double t_;
    Eigen::MatrixXcd ct_;
    std::vector<cplx> kernel_;
    std::size_t panels_ = 0;
    double change_ = 0.0;
};

/**
 * <P(t)> = 2 Im sum_op O_op [ sum_mn D^{mn}_op N_m (N_n - delta_mn)
 *                           + sum_{m!=n,s} D^{nm}_op N_{m,s} N_{n,s} ],
 * the coefficient of U t in <O_1(t, U)>.
 */
inline double perturbation_term(const FockConfiguration& config, const Eigen::MatrixXcd& one_body,
                                 const PerturbationKernel& kernel) {
    const std::size_t L = kernel.modes();
    if (config.modes() != L || static_cast<std::size_t>(one_body.rows()) != L)
        throw Error(Errc::DimensionMismatch, "configuration, observable and kernel differ in mode count");
    const auto mult = multiplicity_tables(config);
    cplx sum = 0.0;
    for (std::size_t o = 0; o < L; ++o)
        for (std::size_t p = 0; p < L; ++p) {
            const cplx w = one_body(o, p);
            if (w == cplx{0.0, 0.0}) continue;
            cplx inner = 0.0;
            for (std::size_t m = 0; m < L; ++m)
                for (std::size_t n = 0; n < L; ++n) {
                    inner += kernel.D(m, n, o, p) * (config.mode_total(m) * (config.mode_total(n) - (m == n ? 1.0 : 0.0)));
                    if (m != n) inner += kernel.D(n, m, o, p) * mult.crossed(m, n);
                }
            sum += w * inner;
        }
    return 2.0 * sum.imag();
}

inline double perturbation_term(const FockConfiguration& config, const Eigen::MatrixXcd& one_body,
                                const Propagator& prop, double t, QuadratureOptions opts = {}) {
    return perturbation_term(config, one_body, PerturbationKernel(prop, t, opts));
}

/// <N_l(t, 0)> + U t <P(t)> for the on-site density.
inline double first_order_prediction(const FockConfiguration& config, std::size_t site, double t, double U,
                                     const Propagator& prop, QuadratureOptions opts = {}) {
    if (site >= prop.modes()) throw Error(Errc::InvalidArgument, "site index out of range");
    const Eigen::VectorXcd row = prop.row(site, t);
    double free = 0.0;
    for (std::size_t m = 0; m < prop.modes(); ++m) free += std::norm(row(m)) * config.mode_total(m);
    if (U == 0.0) return free;
    Eigen::MatrixXcd density = Eigen::MatrixXcd::Zero(prop.modes(), prop.modes());
    density(site, site) = 1.0;
    return free + U * t * perturbation_term(config, density, prop, t, opts);
}

// ---------------------------------------------------------------------------
// Bipartite symmetry
// ---------------------------------------------------------------------------

struct BipartiteCheck {
    bool is_bipartite = false;
    std::vector<int> sublattice;      ///< 0 = A, 1 = B per mode (empty if not bipartite)
    std::vector<double> parity;       ///< diagonal of Pi in the sector basis
    std::optional<double> residual;   ///< max |Pi H_U Pi + H_{-U}|
};

/**
 * Looks for a two-colouring of the modes with J_ij = 0 inside each colour and
 * a vanishing diagonal; when found, Pi = (-1)^(particles on B sites) and the
 * residual of Pi H_U Pi = -H_{-U} is reported.
 */
inline BipartiteCheck bipartite_parity_check(const HoppingModel& hop, std::shared_ptr<const SectorBasis> basis,
                                             double U = 1.0) {
    detail::require_basis(basis);
    const std::size_t L = hop.modes();
    const auto& J = hop.matrix();
    BipartiteCheck out;
    for (std::size_t i = 0; i < L; ++i)
        if (std::abs(J(i, i)) > 1e-12) return out;

    std::vector<int> colour(L, -1);
    for (std::size_t start = 0; start < L; ++start) {
        if (colour[start] >= 0) continue;
        colour[start] = 0;
        std::queue<std::size_t> todo;
        todo.push(start);
        while (!todo.empty()) {
            const std::size_t i = todo.front();
            todo.pop();
            for (std::size_t j = 0; j < L; ++j) {
                if (i == j || std::abs(J(i, j)) <= 1e-12) continue;
                if (colour[j] < 0) {
                    colour[j] = 1 - colour[i];
                    todo.push(j);
                } else if (colour[j] == colour[i]) {
                    return out;
                }
            }
        }
    }

    out.is_bipartite = true;
    out.sublattice = colour;
    out.parity.resize(basis->dimension());
    for (std::size_t r = 0; r < basis->dimension(); ++r) {
        int on_b = 0;
        for (std::size_t l = 0; l < L; ++l)
            if (colour[l] == 1) on_b += basis->unrank(r).mode_total(l);
        out.parity[r] = on_b % 2 == 0 ? 1.0 : -1.0;
    }
    const auto hp = build_hamiltonian(hop, InteractionModel::contact(U), basis);
    const auto hm = build_hamiltonian(hop, InteractionModel::contact(-U), basis);
    SparseMatrixXcd sum = hm.matrix;
    for (int k = 0; k < hp.matrix.outerSize(); ++k)
        for (SparseMatrixXcd::InnerIterator it(hp.matrix, k); it; ++it)
            sum.coeffRef(it.row(), it.col()) += out.parity[it.row()] * out.parity[it.col()] * it.value();
    double worst = 0.0;
    for (int k = 0; k < sum.outerSize(); ++k)
        for (SparseMatrixXcd::InnerIterator it(sum, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    out.residual = worst;
    return out;
}

}  // namespace bosedoi
