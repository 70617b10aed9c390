// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock.hpp
 * @brief Multi-species bosonic Fock configurations, sector bases and the
 *        degree-of-indistinguishability (DOI) measure.
 *
 * A configuration stores N_{l,s}: the number of bosons of species s in mode l.
 * Modes and species are 0-based throughout the library; the CLI accepts and
 * prints 1-based site numbers.
 */

#pragma once

#include <bosedoi/error.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace bosedoi {

/**
 * Occupation matrix of L modes by S species.
 *
 * Immutable after construction. Mode totals N_l, species totals N_s and the
 * particle number N are cached.
 */
class FockConfiguration {
public:
    /// @p occupations is row-major: entry (l, s) at index l * species + s.
    FockConfiguration(std::size_t modes, std::size_t species, std::vector<int> occupations)
        : modes_(modes), species_(species), occ_(std::move(occupations)) {
        if (modes_ == 0 || species_ == 0)
            throw Error(Errc::InvalidArgument, "configuration needs at least one mode and one species");
        if (occ_.size() != modes_ * species_)
            throw Error(Errc::DimensionMismatch, "occupation array does not match L x S");
        mode_totals_.assign(modes_, 0);
        species_totals_.assign(species_, 0);
        for (std::size_t l = 0; l < modes_; ++l) {
            for (std::size_t s = 0; s < species_; ++s) {
                const int n = occ_[l * species_ + s];
                if (n < 0)
                    throw Error(Errc::NegativeOccupation,
                                "N(" + std::to_string(l) + "," + std::to_string(s) + ") = " + std::to_string(n));
                mode_totals_[l] += n;
                species_totals_[s] += n;
                total_ += n;
            }
        }
        if (total_ == 0) throw Error(Errc::EmptyConfiguration, "configuration holds no particles");
    }

    std::size_t modes() const noexcept { return modes_; }
    std::size_t species() const noexcept { return species_; }
    int total() const noexcept { return total_; }

    int operator()(std::size_t l, std::size_t s) const { return occ_[l * species_ + s]; }
    int mode_total(std::size_t l) const { return mode_totals_[l]; }
    int species_total(std::size_t s) const { return species_totals_[s]; }

    const std::vector<int>& mode_totals() const noexcept { return mode_totals_; }
    const std::vector<int>& species_totals() const noexcept { return species_totals_; }
    const std::vector<int>& data() const noexcept { return occ_; }

    /// Column s as a per-mode occupation vector.
    std::vector<int> species_column(std::size_t s) const {
        std::vector<int> col(modes_);
        for (std::size_t l = 0; l < modes_; ++l) col[l] = occ_[l * species_ + s];
        return col;
    }

    std::vector<std::vector<int>> rows() const {
        std::vector<std::vector<int>> out(modes_, std::vector<int>(species_));
        for (std::size_t l = 0; l < modes_; ++l)
            for (std::size_t s = 0; s < species_; ++s) out[l][s] = occ_[l * species_ + s];
        return out;
    }

    friend bool operator==(const FockConfiguration& a, const FockConfiguration& b) {
        return a.modes_ == b.modes_ && a.species_ == b.species_ && a.occ_ == b.occ_;
    }
    friend bool operator<(const FockConfiguration& a, const FockConfiguration& b) {
        return std::tie(a.modes_, a.species_, a.occ_) < std::tie(b.modes_, b.species_, b.occ_);
    }

private:
    std::size_t modes_;
    std::size_t species_;
    std::vector<int> occ_;
    std::vector<int> mode_totals_;
    std::vector<int> species_totals_;
    int total_ = 0;
};

/// Builds a configuration from L rows of S occupations each.
inline FockConfiguration make_config(const std::vector<std::vector<int>>& rows) {
    if (rows.empty()) throw Error(Errc::InvalidArgument, "configuration needs at least one mode");
    const std::size_t species = rows.front().size();
    std::vector<int> flat;
    flat.reserve(rows.size() * species);
    for (const auto& row : rows) {
        if (row.size() != species) throw Error(Errc::DimensionMismatch, "ragged occupation matrix");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return FockConfiguration(rows.size(), species, std::move(flat));
}

// ---------------------------------------------------------------------------
// DOI
// ---------------------------------------------------------------------------

namespace detail {

// Sum over ordered pairs m != n of x_m x_n, i.e. (sum x)^2 - sum x^2.
template <typename Range>
std::int64_t off_diagonal_pair_sum(const Range& xs) {
    std::int64_t sum = 0;
    std::int64_t squares = 0;
    for (auto x : xs) {
        sum += x;
        squares += static_cast<std::int64_t>(x) * x;
    }
    return sum * sum - squares;
}

inline std::int64_t crossed_pair_sum(const FockConfiguration& c) {
    std::int64_t num = 0;
    for (std::size_t s = 0; s < c.species(); ++s) num += off_diagonal_pair_sum(c.species_column(s));
    return num;
}

}  // namespace detail

/// True when at least two modes are populated, i.e. the DOI is not 0/0.
inline bool doi_defined(const FockConfiguration& c) {
    return detail::off_diagonal_pair_sum(c.mode_totals()) > 0;
}

/**
 * Degree of indistinguishability
 *
 *   I = sum_s sum_{m!=n} N_{m,s} N_{n,s} / sum_{m!=n} N_m N_n.
 *
 * Evaluated in exact integer arithmetic. Throws UndefinedDOI when all
 * particles sit in a single mode.
 */
inline double doi(const FockConfiguration& c) {
    const std::int64_t den = detail::off_diagonal_pair_sum(c.mode_totals());
    if (den == 0) throw Error(Errc::UndefinedDOI, "all particles occupy a single mode");
    return static_cast<double>(detail::crossed_pair_sum(c)) / static_cast<double>(den);
}

/// Superposition sum_j c_j |psi_j> of Fock states sharing one density profile.
class SuperposedFock {
public:
    struct Term {
        std::complex<double> weight;
        FockConfiguration config;
    };

    explicit SuperposedFock(std::vector<Term> terms, double norm_tolerance = 1e-12)
        : terms_(std::move(terms)) {
        if (terms_.empty()) throw Error(Errc::InvalidArgument, "superposition has no terms");
        double norm = 0.0;
        for (const auto& t : terms_) {
            norm += std::norm(t.weight);
            if (t.config.modes() != terms_.front().config.modes() ||
                t.config.mode_totals() != terms_.front().config.mode_totals())
                throw Error(Errc::InconsistentDensities, "superposed terms differ in total density");
        }
        if (std::abs(norm - 1.0) > norm_tolerance)
            throw Error(Errc::InvalidArgument, "superposition weights are not normalized");
    }

    const std::vector<Term>& terms() const noexcept { return terms_; }

private:
    std::vector<Term> terms_;
};

/// Additive DOI: sum_j |c_j|^2 I(psi_j).
inline double doi_superposition(const SuperposedFock& state) {
    double value = 0.0;
    for (const auto& t : state.terms()) value += std::norm(t.weight) * doi(t.config);
    return value;
}

/// Two-mode, two-species parametrisation (N, M = N_1 - N_2, delta_l = N_{l,up} - N_{l,down}).
struct TwoModeParams {
    int N = 0;
    int M = 0;
    int delta1 = 0;
    int delta2 = 0;

    int n1() const { return (N + M) / 2; }
    int n2() const { return (N - M) / 2; }

    void validate() const {
        if (N < 1 || std::abs(M) > N || (N + M) % 2 != 0)
            throw Error(Errc::InvalidImbalance, "need N >= 1, |M| <= N and N - M even");
        const auto check = [](int nl, int d) {
            if (std::abs(d) > nl || (nl - d) % 2 != 0)
                throw Error(Errc::InvalidImbalance, "species imbalance incompatible with mode population");
        };
        check(n1(), delta1);
        check(n2(), delta2);
    }

    static TwoModeParams from_config(const FockConfiguration& c) {
        if (c.modes() != 2 || c.species() != 2)
            throw Error(Errc::DimensionMismatch, "two-mode parameters need L = 2 and S = 2");
        return {c.total(), c.mode_total(0) - c.mode_total(1), c(0, 0) - c(0, 1), c(1, 0) - c(1, 1)};
    }

    FockConfiguration to_config() const {
        validate();
        return make_config({{(n1() + delta1) / 2, (n1() - delta1) / 2},
                            {(n2() + delta2) / 2, (n2() - delta2) / 2}});
    }
};

/// Closed form I = 1/2 + 2 d1 d2 / (N^2 - M^2) for L = 2, S = 2.
inline double two_mode_doi(const TwoModeParams& p) {
    p.validate();
    const std::int64_t den = static_cast<std::int64_t>(p.N) * p.N - static_cast<std::int64_t>(p.M) * p.M;
    if (den == 0) throw Error(Errc::UndefinedDOI, "one of the two modes is empty");
    return 0.5 + 2.0 * p.delta1 * p.delta2 / static_cast<double>(den);
}

/**
 * Path multiplicities: ladder(m,n) = N_m N_n, crossed(m,n) = sum_s N_{m,s} N_{n,s}.
 * Diagonals are filled in but consumers sum over m != n only.
 */
struct MultiplicityTables {
    Eigen::MatrixXd ladder;
    Eigen::MatrixXd crossed;

    /// crossed / ladder entrywise, 0 where the ladder multiplicity vanishes.
    Eigen::MatrixXd eta() const {
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ladder.rows(), ladder.cols());
        for (Eigen::Index m = 0; m < ladder.rows(); ++m)
            for (Eigen::Index n = 0; n < ladder.cols(); ++n)
                if (ladder(m, n) != 0.0) out(m, n) = crossed(m, n) / ladder(m, n);
        return out;
    }
};

inline MultiplicityTables multiplicity_tables(const FockConfiguration& c) {
    const auto L = static_cast<Eigen::Index>(c.modes());
    MultiplicityTables t{Eigen::MatrixXd::Zero(L, L), Eigen::MatrixXd::Zero(L, L)};
    for (Eigen::Index m = 0; m < L; ++m) {
        for (Eigen::Index n = 0; n < L; ++n) {
            t.ladder(m, n) = static_cast<double>(c.mode_total(m)) * c.mode_total(n);
            double x = 0.0;
            for (std::size_t s = 0; s < c.species(); ++s) x += static_cast<double>(c(m, s)) * c(n, s);
            t.crossed(m, n) = x;
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Sector basis
// ---------------------------------------------------------------------------

/// Binomial coefficient; returns nullopt when the result does not fit in 64 bits.
inline std::optional<std::uint64_t> checked_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    }
    return static_cast<std::uint64_t>(r);
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    auto r = checked_binomial(n, k);
    if (!r) throw Error(Errc::DimensionOverflow, "binomial coefficient exceeds 64 bits");
    return *r;
}

/**
 * All configurations with fixed per-species particle numbers on L modes.
 *
 * Ordering: each species' occupation vector is ranked in the colexicographic
 * order of its stars-and-bars bar positions b_j = N_0 + ... + N_{j-1} + j - 1
 * (rank = sum_j C(b_j, j), the combinatorial number system). Species ranks are
 * combined as mixed-radix digits with species 0 most significant, so the basis
 * is ordered by species first and by mode occupation within a species.
 */
class SectorBasis {
public:
    static constexpr std::size_t default_max_dimension = 200000;

    SectorBasis(std::size_t modes, std::vector<int> species_counts,
                std::size_t max_dimension = default_max_dimension)
        : modes_(modes), counts_(std::move(species_counts)) {
        if (modes_ == 0) throw Error(Errc::InvalidArgument, "sector needs at least one mode");
        if (counts_.empty()) throw Error(Errc::InvalidArgument, "sector needs at least one species");
        int total = 0;
        for (int n : counts_) {
            if (n < 0) throw Error(Errc::NegativeOccupation, "negative species count");
            total += n;
        }
        if (total == 0) throw Error(Errc::EmptyConfiguration, "sector holds no particles");

        unsigned __int128 dim = 1;
        species_dims_.reserve(counts_.size());
        for (int n : counts_) {
            const auto d = binomial(static_cast<std::uint64_t>(n) + modes_ - 1, modes_ - 1);
            species_dims_.push_back(d);
            dim *= d;
            if (dim > max_dimension)
                throw Error(Errc::DimensionOverflow,
                            "sector dimension exceeds cap of " + std::to_string(max_dimension));
        }
        dimension_ = static_cast<std::size_t>(dim);

        strides_.assign(counts_.size(), 1);
        for (std::size_t s = counts_.size() - 1; s-- > 0;) strides_[s] = strides_[s + 1] * species_dims_[s + 1];

        states_.reserve(dimension_);
        for (std::size_t i = 0; i < dimension_; ++i) states_.push_back(build_state(i));
    }

    std::size_t modes() const noexcept { return modes_; }
    std::size_t species() const noexcept { return counts_.size(); }
    const std::vector<int>& species_counts() const noexcept { return counts_; }
    std::size_t dimension() const noexcept { return dimension_; }
    const std::vector<FockConfiguration>& states() const noexcept { return states_; }

    const FockConfiguration& unrank(std::size_t index) const {
        if (index >= dimension_) throw Error(Errc::InvalidArgument, "basis index out of range");
        return states_[index];
    }

    bool contains(const FockConfiguration& c) const {
        return c.modes() == modes_ && c.species_totals() == counts_;
    }

    std::size_t rank(const FockConfiguration& c) const {
        if (!contains(c)) throw Error(Errc::BasisMismatch, "configuration is not in this sector");
        std::size_t index = 0;
        for (std::size_t s = 0; s < counts_.size(); ++s) index += strides_[s] * species_rank(c.species_column(s));
        return index;
    }

    friend bool operator==(const SectorBasis& a, const SectorBasis& b) {
        return a.modes_ == b.modes_ && a.counts_ == b.counts_;
    }

private:
    std::size_t species_rank(const std::vector<int>& occ) const {
        std::uint64_t r = 0;
        std::uint64_t prefix = 0;
        for (std::size_t j = 1; j < modes_; ++j) {
            prefix += static_cast<std::uint64_t>(occ[j - 1]);
            r += binomial(prefix + j - 1, j);
        }
        return static_cast<std::size_t>(r);
    }

    std::vector<int> species_unrank(std::uint64_t r, int n) const {
        std::vector<std::uint64_t> bars(modes_, 0);
        std::uint64_t upper = static_cast<std::uint64_t>(n) + modes_ - 2;
        for (std::size_t j = modes_ - 1; j >= 1; --j) {
            std::uint64_t b = upper;
            while (binomial(b, j) > r) --b;
            bars[j] = b;
            r -= binomial(b, j);
            upper = b == 0 ? 0 : b - 1;
        }
        std::vector<int> occ(modes_, 0);
        std::uint64_t prev_prefix = 0;
        for (std::size_t j = 1; j < modes_; ++j) {
            const std::uint64_t prefix = bars[j] + 1 - j;
            occ[j - 1] = static_cast<int>(prefix - prev_prefix);
            prev_prefix = prefix;
        }
        occ[modes_ - 1] = n - static_cast<int>(prev_prefix);
        return occ;
    }

    FockConfiguration build_state(std::size_t index) const {
        const std::size_t S = counts_.size();
        std::vector<int> flat(modes_ * S, 0);
        for (std::size_t s = 0; s < S; ++s) {
            const std::uint64_t digit = (index / strides_[s]) % species_dims_[s];
            const auto occ = species_unrank(digit, counts_[s]);
            for (std::size_t l = 0; l < modes_; ++l) flat[l * S + s] = occ[l];
        }
        return FockConfiguration(modes_, S, std::move(flat));
    }

    std::size_t modes_;
    std::vector<int> counts_;
    std::vector<std::uint64_t> species_dims_;
    std::vector<std::uint64_t> strides_;
    std::size_t dimension_ = 0;
    std::vector<FockConfiguration> states_;
};

inline SectorBasis enumerate_sector(std::size_t modes, const std::vector<int>& species_counts,
                                    std::size_t max_dimension = SectorBasis::default_max_dimension) {
    return SectorBasis(modes, species_counts, max_dimension);
}

// ---------------------------------------------------------------------------
// Non-equivalent configurations
// ---------------------------------------------------------------------------

/**
 * Relabels species so that columns are sorted by (N_s, first occupied mode)
 * descending, ties broken by the occupation column itself (descending).
 */
inline FockConfiguration canonicalize_species(const FockConfiguration& c) {
    struct Key {
        int count;
        int first;
        std::vector<int> column;
    };
    std::vector<Key> keys;
    for (std::size_t s = 0; s < c.species(); ++s) {
        auto col = c.species_column(s);
        int first = -1;
        for (std::size_t l = 0; l < col.size(); ++l)
            if (col[l] > 0) {
                first = static_cast<int>(l);
                break;
            }
        keys.push_back({c.species_total(s), first, std::move(col)});
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        return std::tie(a.count, a.first, a.column) > std::tie(b.count, b.first, b.column);
    });
    std::vector<int> flat(c.modes() * c.species());
    for (std::size_t s = 0; s < keys.size(); ++s)
        for (std::size_t l = 0; l < c.modes(); ++l) flat[l * c.species() + s] = keys[s].column[l];
    return FockConfiguration(c.modes(), c.species(), std::move(flat));
}

struct ClassRepresentative {
    FockConfiguration config;
    std::optional<double> doi;  ///< nullopt when the DOI is undefined (single occupied mode)
};

struct DoubleWellClass {
    int delta1;
    int delta2;
    FockConfiguration config;
    std::optional<double> doi;
};

/**
 * One representative per non-equivalent two-species double-well configuration
 * with N particles and mode imbalance M.
 *
 * Species exchange (delta1, delta2) -> (-delta1, -delta2) is always a symmetry.
 * For M = 0 the mode exchange (delta1, delta2) -> (delta2, delta1) is one as
 * well, and representatives satisfy 0 <= |delta2| <= delta1. For M != 0 the
 * representatives satisfy delta1 > 0, or delta1 = 0 and delta2 >= 0.
 * Ordered by delta1, then delta2.
 */
inline std::vector<DoubleWellClass> nonequivalent_double_well(int N, int M) {
    if (N < 1 || std::abs(M) > N || (N - M) % 2 != 0)
        throw Error(Errc::InvalidImbalance, "need N >= 1, |M| <= N and N - M even");
    const int n1 = (N + M) / 2;
    const int n2 = (N - M) / 2;
    std::vector<DoubleWellClass> out;
    for (int d1 = n1 % 2; d1 <= n1; d1 += 2) {
        for (int d2 = -n2; d2 <= n2; d2 += 2) {
            const bool keep = M == 0 ? std::abs(d2) <= d1 : (d1 > 0 || d2 >= 0);
            if (!keep) continue;
            const TwoModeParams p{N, M, d1, d2};
            auto cfg = p.to_config();
            std::optional<double> value;
            if (doi_defined(cfg)) value = doi(cfg);
            out.push_back({d1, d2, std::move(cfg), value});
        }
    }
    return out;
}

/**
 * Non-equivalent two-species configurations for an arbitrary density profile
 * {N_l}. Equivalence is species exchange plus, when @p mirror is set and the
 * profile is a palindrome, mode reflection l -> L-1-l. The representative is
 * the lexicographically largest member of its class. Sorted by DOI, then by
 * occupation.
 */
inline std::vector<ClassRepresentative> nonequivalent_two_species(const std::vector<int>& densities,
                                                                  bool mirror) {
    if (densities.empty()) throw Error(Errc::InvalidArgument, "empty density profile");
    const std::size_t L = densities.size();
    for (int n : densities)
        if (n < 0) throw Error(Errc::NegativeOccupation, "negative mode density");
    const bool palindrome = std::equal(densities.begin(), densities.end(), densities.rbegin());
    const bool use_mirror = mirror && palindrome;

    std::set<std::vector<int>> seen;
    std::vector<ClassRepresentative> out;
    std::vector<int> up(L, 0);
    const auto emit = [&] {
        std::vector<int> flat(2 * L);
        for (std::size_t l = 0; l < L; ++l) {
            flat[2 * l] = up[l];
            flat[2 * l + 1] = densities[l] - up[l];
        }
        std::vector<std::vector<int>> orbit{flat};
        const auto swap_species = [&](const std::vector<int>& v) {
            std::vector<int> w(v.size());
            for (std::size_t l = 0; l < L; ++l) {
                w[2 * l] = v[2 * l + 1];
                w[2 * l + 1] = v[2 * l];
            }
            return w;
        };
        const auto reflect = [&](const std::vector<int>& v) {
            std::vector<int> w(v.size());
            for (std::size_t l = 0; l < L; ++l) {
                w[2 * l] = v[2 * (L - 1 - l)];
                w[2 * l + 1] = v[2 * (L - 1 - l) + 1];
            }
            return w;
        };
        orbit.push_back(swap_species(flat));
        if (use_mirror) {
            orbit.push_back(reflect(flat));
            orbit.push_back(reflect(orbit[1]));
        }
        const auto rep = *std::max_element(orbit.begin(), orbit.end());
        if (!seen.insert(rep).second) return;
        FockConfiguration cfg(L, 2, rep);
        std::optional<double> value;
        if (doi_defined(cfg)) value = doi(cfg);
        out.push_back({std::move(cfg), value});
    };
    // Odometer over N_{l,up} in [0, N_l].
    while (true) {
        emit();
        std::size_t l = 0;
        while (l < L && up[l] == densities[l]) up[l++] = 0;
        if (l == L) break;
        ++up[l];
    }
    std::stable_sort(out.begin(), out.end(), [](const ClassRepresentative& a, const ClassRepresentative& b) {
        const double da = a.doi.value_or(-1.0);
        const double db = b.doi.value_or(-1.0);
        if (da != db) return da < db;
        return a.config.data() < b.config.data();
    });
    return out;
}

}  // namespace bosedoi
