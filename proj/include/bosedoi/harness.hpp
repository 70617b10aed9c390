// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file harness.hpp
 * @brief Experiment orchestration: seeded uniform Fock-state sampling, the
 *        F versus I scan with bound checks and histograms, and interaction
 *        sweeps over double- and triple-well scenarios.
 */

#pragma once

#include <bosedoi/fock.hpp>
#include <bosedoi/freedyn.hpp>
#include <bosedoi/io.hpp>
#include <bosedoi/manybody.hpp>
#include <bosedoi/onebody.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace bosedoi {

// ---------------------------------------------------------------------------
// Parallel map
// ---------------------------------------------------------------------------

/// Calls fn(i) for i in [0, count) on up to hardware_concurrency threads.
/// fn must only write to state owned by index i.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, std::size_t max_threads = 0) {
    std::size_t workers = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

struct SampleSpec {
    std::size_t L = 2;
    int N = 1;
    std::size_t S = 1;
    std::size_t count = 1;
    std::uint64_t seed = 0;
};

/// Generator keyed by (seed, stream, index): the draw for one sample does not
/// depend on how many other samples were drawn before it or on which thread.
inline std::mt19937_64 counted_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

/**
 * Uniform draw over all L x S occupation matrices with N particles: a
 * uniformly random choice of the L*S - 1 bar positions among N + L*S - 1
 * stars-and-bars slots.
 */
template <typename Rng>
FockConfiguration draw_occupation(Rng& rng, std::size_t L, std::size_t S, int N) {
    const std::size_t slots = L * S;
    const std::size_t positions = static_cast<std::size_t>(N) + slots - 1;
    std::vector<std::size_t> all(positions);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> bars;
    bars.reserve(slots - 1);
    std::sample(all.begin(), all.end(), std::back_inserter(bars), slots - 1, rng);
    std::sort(bars.begin(), bars.end());
    std::vector<int> occ(slots);
    std::size_t prev = 0;
    for (std::size_t b = 0; b < bars.size(); ++b) {
        occ[b] = static_cast<int>(bars[b] - prev);
        prev = bars[b] + 1;
    }
    occ[slots - 1] = static_cast<int>(positions - prev);
    return FockConfiguration(L, S, std::move(occ));
}

struct SampleDraw {
    FockConfiguration config;
    std::size_t rejections = 0;
};

/// Sample @p index of @p spec; draws with an undefined DOI are rejected and redrawn.
inline SampleDraw draw_config(const SampleSpec& spec, std::size_t index, std::uint64_t stream = 0) {
    if (spec.L < 2) throw Error(Errc::InvalidArgument, "sampling needs L >= 2 so that the DOI is defined");
    if (spec.N < 2 || spec.S < 1) throw Error(Errc::InvalidArgument, "sampling needs N >= 2 and S >= 1");
    auto rng = counted_rng(spec.seed, stream, index);
    std::size_t rejected = 0;
    while (true) {
        auto cfg = draw_occupation(rng, spec.L, spec.S, spec.N);
        if (doi_defined(cfg)) return {std::move(cfg), rejected};
        ++rejected;
    }
}

struct SampleBatch {
    std::vector<FockConfiguration> configs;
    std::size_t rejections = 0;
};

inline SampleBatch sample_configs(const SampleSpec& spec, std::uint64_t stream = 0) {
    if (spec.count < 1) throw Error(Errc::InvalidArgument, "sample count must be at least 1");
    SampleBatch batch;
    batch.configs.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        auto d = draw_config(spec, i, stream);
        batch.rejections += d.rejections;
        batch.configs.push_back(std::move(d.config));
    }
    return batch;
}

// ---------------------------------------------------------------------------
// Histograms
// ---------------------------------------------------------------------------

/// Uniform bins over [0,1]^2 with one pair of marginal projections per series.
class Histogram2D {
public:
    Histogram2D(std::size_t bins, std::vector<std::size_t> series)
        : bins_(bins), series_(std::move(series)), counts_(bins * bins, 0) {
        if (bins_ == 0) throw Error(Errc::InvalidArgument, "histogram needs at least one bin");
        for (std::size_t s = 0; s < series_.size(); ++s) {
            marginal_x_[series_[s]].assign(bins_, 0);
            marginal_y_[series_[s]].assign(bins_, 0);
        }
    }

    std::size_t bins() const noexcept { return bins_; }
    double edge(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(bins_); }

    std::size_t bin_of(double v) const {
        if (!(v > 0.0)) return 0;
        if (v >= 1.0) return bins_ - 1;
        return std::min(bins_ - 1, static_cast<std::size_t>(v * static_cast<double>(bins_)));
    }

    void add(std::size_t series, double x, double y) {
        const std::size_t bx = bin_of(x);
        const std::size_t by = bin_of(y);
        ++counts_[bx * bins_ + by];
        ++marginal_x_.at(series)[bx];
        ++marginal_y_.at(series)[by];
        ++total_;
    }

    std::size_t count(std::size_t bx, std::size_t by) const { return counts_[bx * bins_ + by]; }
    std::size_t total() const noexcept { return total_; }
    const std::vector<std::size_t>& series() const noexcept { return series_; }
    const std::vector<std::size_t>& marginal_x(std::size_t s) const { return marginal_x_.at(s); }
    const std::vector<std::size_t>& marginal_y(std::size_t s) const { return marginal_y_.at(s); }

    Table density_table() const {
        Table t{{"x_lo", "x_hi", "y_lo", "y_hi", "count"}, {}};
        for (std::size_t bx = 0; bx < bins_; ++bx)
            for (std::size_t by = 0; by < bins_; ++by)
                t.add({edge(bx), edge(bx + 1), edge(by), edge(by + 1), static_cast<double>(count(bx, by))});
        return t;
    }

    Table marginal_table() const {
        Table t{{"series", "axis", "lo", "hi", "count"}, {}};
        for (std::size_t s : series_)
            for (int axis = 0; axis < 2; ++axis)
                for (std::size_t b = 0; b < bins_; ++b) {
                    const auto& m = axis == 0 ? marginal_x_.at(s) : marginal_y_.at(s);
                    t.add({static_cast<double>(s), static_cast<double>(axis), edge(b), edge(b + 1),
                           static_cast<double>(m[b])});
                }
        return t;
    }

private:
    std::size_t bins_;
    std::vector<std::size_t> series_;
    std::vector<std::size_t> counts_;
    std::map<std::size_t, std::vector<std::size_t>> marginal_x_;
    std::map<std::size_t, std::vector<std::size_t>> marginal_y_;
    std::size_t total_ = 0;
};

// ---------------------------------------------------------------------------
// F versus I scan
// ---------------------------------------------------------------------------

struct FiScanOptions {
    std::size_t L = 12;
    int N = 24;
    std::vector<std::size_t> species{2, 3, 4};
    std::size_t samples = 100000;  ///< per species count
    std::uint64_t seed = 7;
    std::size_t site = 0;
    std::size_t bins = 50;
    double J = 1.0;
    std::size_t threads = 0;
    /// Slack on |F - I| <= bound to absorb rounding in the two ratios.
    double rounding_slack = 1e-12;
};

struct FiSample {
    std::size_t S = 0;
    std::size_t index = 0;
    double I = 0.0;
    double F = 0.0;
    double bound_approx = 0.0;
    double bound_rigorous = 0.0;
    bool within_approx = false;
    bool within_rigorous = false;
};

struct FiScanResult {
    AveragedCoefficients coefficients;
    std::vector<FiSample> samples;
    Histogram2D histogram{1, {}};
    std::size_t rejections = 0;
    std::size_t rigorous_violations = 0;
    std::size_t approx_violations = 0;

    Table sample_table() const {
        Table t{{"S", "index", "I", "F", "abs_dev", "bound_approx", "bound_rigorous", "within_approx", "within_rigorous"},
                {}};
        for (const auto& s : samples)
            t.add({static_cast<double>(s.S), static_cast<double>(s.index), s.I, s.F, std::abs(s.F - s.I),
                   s.bound_approx, s.bound_rigorous, s.within_approx ? 1.0 : 0.0, s.within_rigorous ? 1.0 : 0.0});
        return t;
    }

    /// I +/- bound curves for plotting.
    Table bound_table(std::size_t points = 101) const {
        Table t{{"I", "lower_approx", "upper_approx", "lower_rigorous", "upper_rigorous"}, {}};
        const double ratio = coefficients.W / coefficients.mu;
        const double lo = coefficients.min_offdiagonal();
        const double rig = (coefficients.max_offdiagonal() - lo) / lo;
        for (std::size_t k = 0; k < points; ++k) {
            const double I = static_cast<double>(k) / static_cast<double>(points - 1);
            const double g = std::min(I, 1.0 - I);
            t.add({I, I - ratio * g, I + ratio * g, I - rig * g, I + rig * g});
        }
        return t;
    }
};

/**
 * Samples configurations uniformly per species count, evaluates (I, F) with
 * one shared coefficient table, and tallies bound violations. Results are
 * ordered by (S, index) regardless of threading.
 */
inline FiScanResult fi_scan(const FiScanOptions& opt) {
    FiScanResult res;
    res.coefficients = averaged_coefficients(Propagator(hardwall_chain(opt.L, opt.J)), opt.site);
    res.histogram = Histogram2D(opt.bins, opt.species);
    res.samples.resize(opt.species.size() * opt.samples);
    std::vector<std::size_t> rejections(res.samples.size(), 0);

    for (std::size_t si = 0; si < opt.species.size(); ++si) {
        const SampleSpec spec{opt.L, opt.N, opt.species[si], opt.samples, opt.seed};
        parallel_for(
            opt.samples,
            [&, si](std::size_t i) {
                auto d = draw_config(spec, i, spec.S);
                const auto report = normalized_fluctuation(d.config, res.coefficients);
                FiSample s;
                s.S = spec.S;
                s.index = i;
                s.I = report.I;
                s.F = report.F;
                s.bound_approx = report.bound_approx;
                s.bound_rigorous = report.bound_rigorous;
                const double dev = std::abs(s.F - s.I);
                s.within_approx = dev <= s.bound_approx + opt.rounding_slack;
                s.within_rigorous = dev <= s.bound_rigorous + opt.rounding_slack;
                const std::size_t slot = si * opt.samples + i;
                res.samples[slot] = s;
                rejections[slot] = d.rejections;
            },
            opt.threads);
    }
    for (std::size_t k = 0; k < res.samples.size(); ++k) {
        const auto& s = res.samples[k];
        res.histogram.add(s.S, s.I, s.F);
        res.rejections += rejections[k];
        if (!s.within_rigorous) ++res.rigorous_violations;
        if (!s.within_approx) ++res.approx_violations;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Rank statistics
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
        i = j + 1;
    }
    return rank;
}

}  // namespace detail

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error(Errc::InvalidArgument, "spearman needs two equal series");
    const auto rx = detail::average_ranks(x);
    const auto ry = detail::average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

/// Pairs with x_a < x_b but not y_a < y_b. Zero means y is strictly increasing in x.
inline std::size_t rank_order_violations(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t bad = 0;
    for (std::size_t a = 0; a < x.size(); ++a)
        for (std::size_t b = 0; b < x.size(); ++b)
            if (x[a] < x[b] && !(y[a] < y[b])) ++bad;
    return bad;
}

// ---------------------------------------------------------------------------
// Interaction sweeps
// ---------------------------------------------------------------------------

struct Scenario {
    std::string name;
    std::size_t L = 2;
    double J = 1.0;
    std::vector<double> tilt;                   ///< on-site energies, empty for none
    std::vector<std::vector<int>> profiles;     ///< initial density profiles {N_l}
    std::vector<double> series_u;               ///< U values for time series
    std::vector<double> times;                  ///< time grid for the series
    std::vector<double> u_grid;                 ///< U values for the sweep tables
    double t_star = 1.0;                        ///< time of the <N_1(t*, U)> column
    bool first_order = false;                   ///< add first-order prediction columns
    bool time_average = true;                   ///< add time-averaged variance column
    std::size_t site = 0;
};

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

/// Named presets: fig3, fig4a, fig4b, fig5a, fig5b.
inline Scenario scenario_preset(const std::string& name) {
    Scenario s;
    s.name = name;
    if (name == "fig3") {
        s.profiles = {{4, 4}};
        s.series_u = {0.0, 0.3};
        s.times = linspace(0.0, 10.0, 201);
        s.u_grid = {0.0, 0.3};
    } else if (name == "fig4a" || name == "fig4b") {
        const bool a = name == "fig4a";
        s.profiles = {a ? std::vector<int>{6, 2} : std::vector<int>{4, 4}};
        s.tilt = {0.0, a ? 4.0 : 3.0};
        s.series_u = {0.3};
        s.times = linspace(0.0, 2.0, 41);
        s.u_grid = linspace(0.0, 1.0, 21);
        s.first_order = true;
        s.time_average = false;
    } else if (name == "fig5a") {
        s.profiles = {{4, 4}, {7, 1}};
        s.u_grid = linspace(0.1, 3.0, 30);
    } else if (name == "fig5b") {
        s.L = 3;
        s.profiles = {{3, 3, 3}, {7, 1, 1}};
        s.u_grid = linspace(0.1, 3.0, 30);
    } else {
        throw Error(Errc::InvalidArgument, "unknown scenario '" + name + "'");
    }
    return s;
}

/// Non-equivalent two-species configurations for one profile of a scenario.
inline std::vector<ClassRepresentative> scenario_classes(const Scenario& s, const std::vector<int>& profile) {
    if (profile.size() != s.L) throw Error(Errc::DimensionMismatch, "profile length differs from L");
    if (s.L == 2) {
        const int N = profile[0] + profile[1];
        std::vector<ClassRepresentative> out;
        for (auto& c : nonequivalent_double_well(N, profile[0] - profile[1])) out.push_back({c.config, c.doi});
        return out;
    }
    return nonequivalent_two_species(profile, s.tilt.empty());
}

struct ExperimentRecord {
    std::string name;
    json parameters;
    std::uint64_t seed = 0;
    std::string version = version_tag;
    std::map<std::string, Table> tables;
    double wall_seconds = 0.0;

    /// Manifest; wall-clock is kept outside "tables" so table files stay reproducible.
    json manifest() const {
        json files = json::object();
        for (const auto& [key, table] : tables) files[key] = key + ".csv";
        return json{{"name", name},   {"parameters", parameters}, {"seed", seed},
                    {"version", version}, {"tables", files},      {"wall_seconds", wall_seconds}};
    }
};

namespace detail {

struct SectorCache {
    std::map<std::vector<int>, std::shared_ptr<const SectorBasis>> bases;
    std::map<std::pair<std::vector<int>, double>, std::shared_ptr<const Eigensystem>> systems;

    std::shared_ptr<const SectorBasis> basis(std::size_t L, const std::vector<int>& counts) {
        auto& b = bases[counts];
        if (!b) b = std::make_shared<const SectorBasis>(L, counts);
        return b;
    }

    std::shared_ptr<const Eigensystem> system(const HoppingModel& hop, std::size_t L, const std::vector<int>& counts,
                                              double U) {
        auto& s = systems[{counts, U}];
        if (!s) {
            const auto H = build_hamiltonian(hop, InteractionModel::contact(U), basis(L, counts));
            s = std::make_shared<const Eigensystem>(diagonalize(H));
        }
        return s;
    }
};

}  // namespace detail

/**
 * Runs a scenario over all non-equivalent configurations of each profile.
 *
 * Tables:
 *   configs      config_id, profile_id, I (NaN if undefined), N_up, N_down
 *   time_series  U, config_id, I, t, N1, var_N1 [, N1_free, N1_first_order]
 *   u_sweep      U, config_id, I, N1_tstar [, N1_first_order], time_avg_variance
 *   correlation  U, profile_id, spearman, rank_violations   (when time averages are on)
 */
inline ExperimentRecord interaction_sweep(const Scenario& s) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentRecord rec;
    rec.name = s.name;
    rec.parameters = json{{"L", s.L},          {"J", s.J},           {"tilt", s.tilt},
                          {"profiles", s.profiles}, {"series_u", s.series_u}, {"times", s.times},
                          {"u_grid", s.u_grid}, {"t_star", s.t_star}, {"first_order", s.first_order},
                          {"time_average", s.time_average}, {"site", s.site + 1}};

    std::vector<double> tilt = s.tilt;
    const HoppingModel hop = hardwall_chain(s.L, s.J, tilt);
    const Propagator prop(hop);
    detail::SectorCache cache;

    struct Entry {
        std::size_t profile;
        FockConfiguration config;
        double I;
    };
    std::vector<Entry> entries;
    json config_list = json::array();
    Table configs{{"config_id", "profile_id", "I", "N_up", "N_down"}, {}};
    for (std::size_t p = 0; p < s.profiles.size(); ++p) {
        for (auto& cls : scenario_classes(s, s.profiles[p])) {
            const double I = cls.doi.value_or(std::nan(""));
            configs.add({static_cast<double>(entries.size()), static_cast<double>(p), I,
                         static_cast<double>(cls.config.species_total(0)),
                         static_cast<double>(cls.config.species_total(1))});
            config_list.push_back(config_to_json(cls.config));
            entries.push_back({p, cls.config, I});
        }
    }
    rec.parameters["configs"] = config_list;
    rec.tables["configs"] = configs;

    Eigen::MatrixXcd density = Eigen::MatrixXcd::Zero(s.L, s.L);
    density(s.site, s.site) = 1.0;

    if (!s.series_u.empty() && !s.times.empty()) {
        Table ts{{"U", "config_id", "I", "t", "N1", "var_N1"}, {}};
        if (s.first_order) {
            ts.columns.push_back("N1_free");
            ts.columns.push_back("N1_first_order");
        }
        for (double U : s.series_u) {
            for (std::size_t e = 0; e < entries.size(); ++e) {
                const auto& cfg = entries[e].config;
                const auto sys = cache.system(hop, s.L, cfg.species_totals(), U);
                const auto spec = spectral_decomposition(sys, cfg);
                const auto obs = density_operator(sys->basis, s.site);
                const auto moments = evolve_observable(spec, obs, s.times);
                for (std::size_t k = 0; k < s.times.size(); ++k) {
                    std::vector<double> row{U, static_cast<double>(e), entries[e].I, s.times[k], moments[k].mean,
                                            moments[k].variance()};
                    if (s.first_order) {
                        const double t = s.times[k];
                        const double free = density_expectation(cfg, prop, s.site, t);
                        row.push_back(free);
                        row.push_back(t > 0.0 ? free + U * t * perturbation_term(cfg, density, prop, t) : free);
                    }
                    ts.add(std::move(row));
                }
            }
        }
        rec.tables["time_series"] = ts;
    }

    if (!s.u_grid.empty()) {
        Table sweep{{"U", "config_id", "I", "N1_tstar"}, {}};
        if (s.first_order) sweep.columns.push_back("N1_first_order");
        if (s.time_average) sweep.columns.push_back("time_avg_variance");
        Table corr{{"U", "profile_id", "spearman", "rank_violations"}, {}};

        std::vector<double> slope(entries.size(), 0.0);
        std::vector<double> free(entries.size(), 0.0);
        if (s.first_order && s.t_star > 0.0) {
            for (std::size_t e = 0; e < entries.size(); ++e) {
                slope[e] = s.t_star * perturbation_term(entries[e].config, density, prop, s.t_star);
                free[e] = density_expectation(entries[e].config, prop, s.site, s.t_star);
            }
        }
        for (double U : s.u_grid) {
            std::vector<double> avg(entries.size(), 0.0);
            for (std::size_t e = 0; e < entries.size(); ++e) {
                const auto& cfg = entries[e].config;
                const auto sys = cache.system(hop, s.L, cfg.species_totals(), U);
                const auto spec = spectral_decomposition(sys, cfg);
                const auto obs = density_operator(sys->basis, s.site);
                std::vector<double> row{U, static_cast<double>(e), entries[e].I,
                                        evolve_observable(spec, obs, {s.t_star})[0].mean};
                if (s.first_order) row.push_back(free[e] + U * slope[e]);
                if (s.time_average) {
                    avg[e] = time_avg_variance(spec, obs);
                    row.push_back(avg[e]);
                }
                sweep.add(std::move(row));
            }
            if (s.time_average) {
                for (std::size_t p = 0; p < s.profiles.size(); ++p) {
                    std::vector<double> xs, ys;
                    for (std::size_t e = 0; e < entries.size(); ++e)
                        if (entries[e].profile == p && !std::isnan(entries[e].I)) {
                            xs.push_back(entries[e].I);
                            ys.push_back(avg[e]);
                        }
                    if (xs.size() < 2) continue;
                    corr.add({U, static_cast<double>(p), spearman(xs, ys),
                              static_cast<double>(rank_order_violations(xs, ys))});
                }
            }
        }
        rec.tables["u_sweep"] = sweep;
        if (s.time_average) rec.tables["correlation"] = corr;
    }

    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

/// Writes manifest.json plus one CSV per table into @p dir.
inline void write_record(const ExperimentRecord& rec, const std::filesystem::path& dir) {
    for (const auto& [key, table] : rec.tables) write_atomic(dir / (key + ".csv"), to_csv(table));
    write_atomic(dir / "manifest.json", rec.manifest().dump(2) + "\n");
}

}  // namespace bosedoi
