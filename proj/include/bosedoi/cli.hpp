// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cli.hpp
 * @brief The bosedoi command-line front end.
 *
 * Exit codes: 0 success, 1 invalid input or usage, 2 numerical failure (and
 * failed checks under `verify`).
 */

#pragma once

#include <bosedoi/error.hpp>
#include <bosedoi/fock.hpp>
#include <bosedoi/freedyn.hpp>
#include <bosedoi/harness.hpp>
#include <bosedoi/io.hpp>
#include <bosedoi/manybody.hpp>
#include <bosedoi/onebody.hpp>
#include <bosedoi/verify.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bosedoi::cli {

inline constexpr const char* out_dir_env = "BOSEDOI_OUT_DIR";
inline constexpr const char* default_out_dir = "bosedoi-out";
inline constexpr const char* units_note =
    "Units: hbar = 1, energies in units of the hopping J, times in units of 1/J. Sites are numbered from 1.";

struct Options {
    std::string config_file;
    std::string out_dir;

    std::string config;  // configuration JSON file
    std::string output;  // optional single-file output (doi, fluct)
    std::size_t site = 1;
    double J = 1.0;

    // evolve
    double U = 0.0;
    std::vector<double> tilt;
    double t_max = 10.0;
    std::size_t t_points = 201;

    // coeff-stats
    std::vector<std::size_t> Ls{10, 15, 20, 30, 40};

    // fi-scan
    std::size_t L = 12;
    int N = 24;
    std::vector<std::size_t> S{2, 3, 4};
    std::size_t samples = 100000;
    std::uint64_t seed = 7;
    std::size_t bins = 50;
    std::size_t threads = 0;

    // sweep-u
    std::string scenario = "fig5a";
    std::optional<int> sweep_N;
    std::optional<int> sweep_M;
    std::optional<double> sweep_F;
    std::optional<double> u_min;
    std::optional<double> u_max;
    std::optional<std::size_t> u_points;
    std::optional<double> sweep_t_max;
    std::optional<std::size_t> sweep_t_points;
    std::optional<double> t_star;

    bool quick = false;
};

namespace detail {

inline void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config-file", o.config_file, "key=value file; command-line flags win on conflict");
    sub->footer(units_note);
}

inline void add_out_dir(CLI::App* sub, Options& o) {
    sub->add_option("--out-dir", o.out_dir,
                    std::string("output directory (default: $") + out_dir_env + " or ./" + default_out_dir + ")");
}

inline std::unique_ptr<CLI::App> make_app(Options& o) {
    auto app = std::make_unique<CLI::App>("Degree of indistinguishability of multi-species bosonic Fock states.", "bosedoi");
    app->footer(units_note);
    app->require_subcommand(1);
    app->set_version_flag("--version", version_tag);

    auto* doi_cmd = app->add_subcommand("doi", "DOI of one configuration or an array of them");
    doi_cmd->add_option("--config", o.config, "configuration JSON file")->required();
    doi_cmd->add_option("--output", o.output, "also write CSV (config_id, N, I) to this file");
    add_common(doi_cmd, o);

    auto* fluct = app->add_subcommand("fluct", "time-averaged density variance, F and its bounds on a hard-wall chain");
    fluct->add_option("--config", o.config, "configuration JSON file")->required();
    fluct->add_option("--site", o.site, "site l (1-based)")->check(CLI::PositiveNumber);
    fluct->add_option("--J", o.J, "hopping (energy, units of J)")->check(CLI::PositiveNumber);
    fluct->add_option("--output", o.output, "also write a CSV row per configuration to this file");
    add_common(fluct, o);

    auto* coeff = app->add_subcommand("coeff-stats", "mean and spread of the time-averaged coefficients versus L");
    coeff->add_option("--L", o.Ls, "chain lengths, comma separated")->delimiter(',')->check(CLI::PositiveNumber);
    coeff->add_option("--site", o.site, "site l (1-based)")->check(CLI::PositiveNumber);
    add_out_dir(coeff, o);
    add_common(coeff, o);

    auto* scan = app->add_subcommand("fi-scan", "F versus I for uniformly sampled configurations");
    scan->add_option("--L", o.L, "chain length")->check(CLI::Range(2, 1000));
    scan->add_option("--N", o.N, "particle number")->check(CLI::Range(2, 100000));
    scan->add_option("--S", o.S, "species counts, comma separated")->delimiter(',')->check(CLI::PositiveNumber);
    scan->add_option("--samples", o.samples, "samples per species count")->check(CLI::PositiveNumber);
    scan->add_option("--seed", o.seed, "RNG seed");
    scan->add_option("--site", o.site, "site l (1-based)")->check(CLI::PositiveNumber);
    scan->add_option("--bins", o.bins, "histogram bins per axis")->check(CLI::PositiveNumber);
    scan->add_option("--J", o.J, "hopping (energy, units of J)")->check(CLI::PositiveNumber);
    scan->add_option("--threads", o.threads, "worker threads (0 = hardware concurrency)");
    add_out_dir(scan, o);
    add_common(scan, o);

    auto* evolve = app->add_subcommand("evolve", "exact <N_l(t)> and Var N_l(t) for one configuration");
    evolve->add_option("--config", o.config, "configuration JSON file")->required();
    evolve->add_option("--U", o.U, "on-site interaction (energy, units of J)");
    evolve->add_option("--J", o.J, "hopping (energy, units of J)")->check(CLI::PositiveNumber);
    evolve->add_option("--tilt", o.tilt, "on-site energies, one per site, comma separated (energy, units of J)")
        ->delimiter(',');
    evolve->add_option("--site", o.site, "site l (1-based)")->check(CLI::PositiveNumber);
    evolve->add_option("--t-max", o.t_max, "final time (time, units of 1/J)")->check(CLI::NonNegativeNumber);
    evolve->add_option("--t-points", o.t_points, "number of time points")->check(CLI::PositiveNumber);
    add_out_dir(evolve, o);
    add_common(evolve, o);

    auto* sweep = app->add_subcommand("sweep-u", "interaction sweep over all non-equivalent configurations of a scenario");
    sweep->add_option("--scenario", o.scenario, "fig3, fig4a, fig4b, fig5a or fig5b")
        ->check(CLI::IsMember({"fig3", "fig4a", "fig4b", "fig5a", "fig5b"}));
    sweep->add_option("--N", o.sweep_N, "particle number (two-site scenarios)");
    sweep->add_option("--M", o.sweep_M, "imbalance N_1 - N_2 (two-site scenarios)");
    sweep->add_option("--F", o.sweep_F, "tilt: site l gets (l - 1) F (energy, units of J)");
    sweep->add_option("--u-min", o.u_min, "smallest U of the sweep (energy, units of J)");
    sweep->add_option("--u-max", o.u_max, "largest U of the sweep (energy, units of J)");
    sweep->add_option("--u-points", o.u_points, "number of U values")->check(CLI::PositiveNumber);
    sweep->add_option("--t-max", o.sweep_t_max, "end of the time series (time, units of 1/J)");
    sweep->add_option("--t-points", o.sweep_t_points, "points in the time series")->check(CLI::PositiveNumber);
    sweep->add_option("--t-star", o.t_star, "time of the <N_1(t*)> column (time, units of 1/J)");
    add_out_dir(sweep, o);
    add_common(sweep, o);

    auto* verify = app->add_subcommand("verify", "run the acceptance checks; nonzero exit on any failure");
    verify->add_flag("--quick", o.quick, "smaller sample for the F-I scan check");
    add_common(verify, o);
    return app;
}

inline std::vector<std::pair<std::string, std::string>> read_key_values(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::UsageError, path + ":" + std::to_string(lineno) + ": expected key=value");
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

inline void parse_args(CLI::App& app, const std::vector<std::string>& args) {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
}

/// Args plus the config file's keys that @p parsed (already parsed from args) left unset.
inline std::vector<std::string> merge_config_file(const CLI::App& parsed, const std::string& config_file,
                                                  const std::vector<std::string>& args) {
    if (config_file.empty()) return args;
    const CLI::App* sub = parsed.get_subcommands().front();
    std::vector<std::string> merged{args.front()};
    for (const auto& [key, value] : read_key_values(config_file)) {
        const auto* opt = sub->get_option_no_throw("--" + key);
        if (!opt || key == "config-file")
            throw Error(Errc::UsageError, "unknown key '" + key + "' for " + sub->get_name());
        if (opt->count() > 0) continue;
        if (opt->get_type_size() == 0) {
            if (value == "true" || value == "1") merged.push_back("--" + key);
            continue;
        }
        merged.push_back("--" + key);
        merged.push_back(value);
    }
    merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

inline std::filesystem::path out_dir(const Options& o) {
    if (!o.out_dir.empty()) return o.out_dir;
    if (const char* env = std::getenv(out_dir_env); env && *env) return env;
    return default_out_dir;
}

inline std::vector<FockConfiguration> load_configs(const std::string& path) {
    return configs_from_json(parse_json(read_file(path)));
}

inline std::size_t zero_based_site(std::size_t site, std::size_t L) {
    if (site < 1 || site > L)
        throw Error(Errc::InvalidArgument, "site " + std::to_string(site) + " outside 1.." + std::to_string(L));
    return site - 1;
}

inline void write_manifest(const std::filesystem::path& dir, const std::string& command, json parameters,
                           const std::vector<std::string>& argv, const std::vector<std::string>& files) {
    json m{{"command", command},
           {"parameters", std::move(parameters)},
           {"version", version_tag},
           {"replay", argv},
           {"files", files}};
    write_atomic(dir / "manifest.json", m.dump(2) + "\n");
}

inline void announce(const std::filesystem::path& dir, const std::vector<std::string>& files) {
    for (const auto& f : files) std::cout << "wrote " << (dir / f).string() << '\n';
    std::cout << "wrote " << (dir / "manifest.json").string() << '\n';
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline int cmd_doi(const Options& o) {
    const auto configs = load_configs(o.config);
    Table t{{"config_id", "N", "I"}, {}};
    for (std::size_t i = 0; i < configs.size(); ++i)
        t.add({static_cast<double>(i), static_cast<double>(configs[i].total()), doi(configs[i])});
    if (configs.size() == 1) {
        std::cout << format_real(t.rows[0][2]) << '\n';
    } else {
        std::cout << to_csv(t);
    }
    if (!o.output.empty()) write_atomic(o.output, to_csv(t));
    return 0;
}

inline int cmd_fluct(const Options& o) {
    const auto configs = load_configs(o.config);
    const std::size_t L = configs.front().modes();
    const auto avg = averaged_coefficients(Propagator(hardwall_chain(L, o.J)), zero_based_site(o.site, L));
    json out = json::array();
    Table t = report_table();
    t.columns.insert(t.columns.begin(), "config_id");
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto r = normalized_fluctuation(configs[i], avg);
        out.push_back(report_to_json(r));
        auto row = report_row(r);
        row.insert(row.begin(), static_cast<double>(i));
        t.add(std::move(row));
    }
    std::cout << (configs.size() == 1 ? out[0] : out).dump(2) << '\n';
    if (!o.output.empty()) write_atomic(o.output, to_csv(t));
    return 0;
}

inline int cmd_coeff_stats(const Options& o, const std::vector<std::string>& argv) {
    Table t{{"L", "l", "mu_C", "W_C", "ratio", "fit_mu", "fit_W", "fit_ratio"}, {}};
    for (std::size_t L : o.Ls) {
        if (L < 2) throw Error(Errc::InvalidArgument, "coefficient statistics need L >= 2");
        const auto s = coefficient_stats(L, zero_based_site(o.site, L));
        t.add({static_cast<double>(L), static_cast<double>(o.site), s.mu, s.W, s.ratio, s.fit_mu, s.fit_W, s.fit_ratio});
    }
    const auto dir = out_dir(o);
    write_atomic(dir / "coeff_stats.csv", to_csv(t));
    write_manifest(dir, "coeff-stats", json{{"L", o.Ls}, {"site", o.site}, {"J", 1.0}}, argv, {"coeff_stats.csv"});
    announce(dir, {"coeff_stats.csv"});
    return 0;
}

inline int cmd_fi_scan(const Options& o, const std::vector<std::string>& argv) {
    FiScanOptions opt;
    opt.L = o.L;
    opt.N = o.N;
    opt.species = o.S;
    opt.samples = o.samples;
    opt.seed = o.seed;
    opt.site = zero_based_site(o.site, o.L);
    opt.bins = o.bins;
    opt.J = o.J;
    opt.threads = o.threads;
    const auto res = fi_scan(opt);

    const auto dir = out_dir(o);
    const std::vector<std::string> files{"samples.csv", "histogram.csv", "marginals.csv", "bounds.csv"};
    write_atomic(dir / files[0], to_csv(res.sample_table()));
    write_atomic(dir / files[1], to_csv(res.histogram.density_table()));
    write_atomic(dir / files[2], to_csv(res.histogram.marginal_table()));
    write_atomic(dir / files[3], to_csv(res.bound_table()));
    json params{{"L", o.L},         {"N", o.N},       {"S", o.S},         {"samples", o.samples},
                {"seed", o.seed},   {"site", o.site}, {"bins", o.bins},   {"J", o.J},
                {"mu_C", res.coefficients.mu},        {"W_C", res.coefficients.W},
                {"rejections", res.rejections},       {"rigorous_violations", res.rigorous_violations},
                {"approx_violations", res.approx_violations}};
    write_manifest(dir, "fi-scan", params, argv, files);
    announce(dir, files);
    std::cout << "rigorous-bound violations: " << res.rigorous_violations << " of " << res.samples.size() << '\n';
    return 0;
}

inline int cmd_evolve(const Options& o, const std::vector<std::string>& argv) {
    const auto configs = load_configs(o.config);
    if (configs.size() != 1) throw Error(Errc::InvalidArgument, "evolve takes exactly one configuration");
    const auto& cfg = configs.front();
    const std::size_t L = cfg.modes();
    const std::size_t site = zero_based_site(o.site, L);
    const HoppingModel hop = hardwall_chain(L, o.J, o.tilt);
    auto basis = std::make_shared<const SectorBasis>(L, cfg.species_totals());
    const auto sys = std::make_shared<const Eigensystem>(
        diagonalize(build_hamiltonian(hop, InteractionModel::contact(o.U), basis)));
    const auto times = linspace(0.0, o.t_max, o.t_points);
    const auto moments = evolve_observable(spectral_decomposition(sys, cfg), density_operator(basis, site), times);

    Table t{{"t", "N_l", "var_N_l"}, {}};
    for (std::size_t k = 0; k < times.size(); ++k) t.add({times[k], moments[k].mean, moments[k].variance()});
    const auto dir = out_dir(o);
    write_atomic(dir / "evolve.csv", to_csv(t));
    json params{{"config", config_to_json(cfg)}, {"U", o.U},         {"J", o.J},
                {"tilt", o.tilt},                {"site", o.site},   {"t_max", o.t_max},
                {"t_points", o.t_points},        {"I", doi_defined(cfg) ? json(doi(cfg)) : json(nullptr)}};
    write_manifest(dir, "evolve", params, argv, {"evolve.csv"});
    announce(dir, {"evolve.csv"});
    return 0;
}

inline Scenario scenario_from(const Options& o) {
    Scenario s = scenario_preset(o.scenario);
    if (o.sweep_N || o.sweep_M) {
        if (s.L != 2) throw Error(Errc::InvalidArgument, "--N and --M apply to two-site scenarios only");
        const int N = o.sweep_N.value_or(s.profiles.front()[0] + s.profiles.front()[1]);
        const int M = o.sweep_M.value_or(0);
        if (std::abs(M) > N || (N - M) % 2 != 0) throw Error(Errc::InvalidImbalance, "need |M| <= N and N - M even");
        s.profiles = {{(N + M) / 2, (N - M) / 2}};
    }
    if (o.sweep_F) {
        s.tilt.assign(s.L, 0.0);
        for (std::size_t l = 0; l < s.L; ++l) s.tilt[l] = static_cast<double>(l) * *o.sweep_F;
    }
    if (o.u_min || o.u_max || o.u_points) {
        const double lo = o.u_min.value_or(s.u_grid.empty() ? 0.0 : s.u_grid.front());
        const double hi = o.u_max.value_or(s.u_grid.empty() ? lo : s.u_grid.back());
        s.u_grid = linspace(lo, hi, o.u_points.value_or(std::max<std::size_t>(s.u_grid.size(), 1)));
    }
    if (o.sweep_t_max || o.sweep_t_points) {
        const double hi = o.sweep_t_max.value_or(s.times.empty() ? 10.0 : s.times.back());
        s.times = linspace(0.0, hi, o.sweep_t_points.value_or(std::max<std::size_t>(s.times.size(), 2)));
        if (s.series_u.empty()) s.series_u = {0.0};
    }
    if (o.t_star) s.t_star = *o.t_star;
    s.site = zero_based_site(o.site, s.L);
    return s;
}

inline int cmd_sweep_u(const Options& o, const std::vector<std::string>& argv) {
    auto rec = interaction_sweep(scenario_from(o));
    rec.parameters["replay"] = argv;
    const auto dir = out_dir(o);
    write_record(rec, dir);
    std::vector<std::string> files;
    for (const auto& [key, table] : rec.tables) files.push_back(key + ".csv");
    announce(dir, files);
    return 0;
}

inline int cmd_verify(const Options& o) {
    bool ok = true;
    for (const auto& r : run_checks(o.quick)) {
        std::cout << format_check(r) << std::endl;
        ok = ok && r.passed;
    }
    return ok ? 0 : 2;
}

}  // namespace detail

namespace detail {

// Help and version requests exit 0; every other parse error is a usage error.
// The first pass only locates the subcommand and --config-file, so required
// options may still come from the file.
inline void relax_required(CLI::App& app) {
    for (auto* sub : app.get_subcommands({}))
        for (auto* opt : sub->get_options()) opt->required(false);
}

inline int parse_or_exit(CLI::App& app, const std::vector<std::string>& args) {
    try {
        parse_args(app, args);
        return -1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
}

}  // namespace detail

/// Entry point; returns the process exit code.
inline int run(int argc, char** argv) {
    const std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
    try {
        Options first;
        auto probe = detail::make_app(first);
        detail::relax_required(*probe);
        if (int code = detail::parse_or_exit(*probe, args); code >= 0) return code;
        const auto merged = detail::merge_config_file(*probe, first.config_file, args);

        Options o;
        auto app = detail::make_app(o);
        if (int code = detail::parse_or_exit(*app, merged); code >= 0) return code;
        const std::string cmd = app->get_subcommands().front()->get_name();
        if (cmd == "doi") return detail::cmd_doi(o);
        if (cmd == "fluct") return detail::cmd_fluct(o);
        if (cmd == "coeff-stats") return detail::cmd_coeff_stats(o, merged);
        if (cmd == "fi-scan") return detail::cmd_fi_scan(o, merged);
        if (cmd == "evolve") return detail::cmd_evolve(o, merged);
        if (cmd == "sweep-u") return detail::cmd_sweep_u(o, merged);
        if (cmd == "verify") return detail::cmd_verify(o);
        return 1;
    } catch (const Error& e) {
        std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
        return is_numerical(e.code()) ? 2 : 1;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace bosedoi::cli
