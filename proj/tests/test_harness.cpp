// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

#include <bosedoi/harness.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <map>

using namespace bosedoi;

TEST(Sampling, SingleParticleIsUniform) {
    std::size_t left = 0;
    const std::size_t draws = 20000;
    for (std::size_t i = 0; i < draws; ++i) {
        auto rng = counted_rng(5, 0, i);
        if (draw_occupation(rng, 2, 1, 1)(0, 0) == 1) ++left;
    }
    EXPECT_NEAR(static_cast<double>(left) / draws, 0.5, 0.02);
}

TEST(Sampling, ChiSquareOverAllMatrices) {
    // L = 3, S = 2, N = 2: C(7, 2) = 21 occupation matrices.
    std::map<std::vector<int>, std::size_t> hits;
    const std::size_t draws = 21000;
    for (std::size_t i = 0; i < draws; ++i) {
        auto rng = counted_rng(11, 3, i);
        ++hits[draw_occupation(rng, 3, 2, 2).data()];
    }
    ASSERT_EQ(hits.size(), 21u);
    const double expected = static_cast<double>(draws) / 21.0;
    double chi2 = 0.0;
    for (const auto& [occ, n] : hits) chi2 += (n - expected) * (n - expected) / expected;
    EXPECT_LT(chi2, 45.3);  // 20 degrees of freedom, p = 0.001
}

TEST(Sampling, TotalsAreExact) {
    for (std::size_t i = 0; i < 200; ++i) {
        auto rng = counted_rng(1, 2, i);
        EXPECT_EQ(draw_occupation(rng, 12, 4, 24).total(), 24);
    }
}

TEST(Sampling, Deterministic) {
    const SampleSpec spec{12, 24, 3, 50, 42};
    const auto a = sample_configs(spec, 3);
    const auto b = sample_configs(spec, 3);
    EXPECT_EQ(a.configs, b.configs);
    const auto other = sample_configs(SampleSpec{12, 24, 3, 50, 43}, 3);
    EXPECT_NE(a.configs, other.configs);
}

TEST(Sampling, IndexAddressable) {
    const SampleSpec spec{6, 10, 2, 30, 9};
    const auto batch = sample_configs(spec, 2);
    for (std::size_t i : {0u, 7u, 29u}) EXPECT_EQ(draw_config(spec, i, 2).config, batch.configs[i]);
}

TEST(Sampling, SingleSpeciesGivesDoiOne) {
    const auto batch = sample_configs(SampleSpec{5, 6, 1, 100, 3});
    for (const auto& c : batch.configs) EXPECT_DOUBLE_EQ(doi(c), 1.0);
}

TEST(Sampling, RejectsUndefinedDoi) {
    const auto batch = sample_configs(SampleSpec{2, 2, 2, 200, 4});
    for (const auto& c : batch.configs) EXPECT_TRUE(doi_defined(c));
    EXPECT_GT(batch.rejections, 0u);
}

TEST(Sampling, InvalidSpecs) {
    EXPECT_THROW(draw_config(SampleSpec{1, 4, 1, 1, 0}, 0), Error);
    EXPECT_THROW(draw_config(SampleSpec{3, 1, 1, 1, 0}, 0), Error);
    EXPECT_THROW(sample_configs(SampleSpec{3, 4, 1, 0, 0}), Error);
}

TEST(FiScan, ThreadCountDoesNotChangeResults) {
    FiScanOptions opt;
    opt.samples = 300;
    opt.threads = 1;
    const auto one = fi_scan(opt);
    opt.threads = 4;
    const auto four = fi_scan(opt);
    ASSERT_EQ(one.samples.size(), four.samples.size());
    for (std::size_t i = 0; i < one.samples.size(); ++i) {
        EXPECT_EQ(one.samples[i].I, four.samples[i].I);
        EXPECT_EQ(one.samples[i].F, four.samples[i].F);
    }
    EXPECT_EQ(one.rejections, four.rejections);
}

TEST(FiScan, SingleSpeciesSitsAtOne) {
    FiScanOptions opt;
    opt.species = {1};
    opt.samples = 50;
    const auto r = fi_scan(opt);
    for (const auto& s : r.samples) {
        EXPECT_DOUBLE_EQ(s.I, 1.0);
        EXPECT_NEAR(s.F, 1.0, 1e-12);
    }
}

TEST(FiScan, HistogramTotals) {
    FiScanOptions opt;
    opt.samples = 200;
    opt.bins = 10;
    const auto r = fi_scan(opt);
    EXPECT_EQ(r.histogram.total(), 600u);
    std::size_t sum = 0;
    for (std::size_t bx = 0; bx < 10; ++bx)
        for (std::size_t by = 0; by < 10; ++by) sum += r.histogram.count(bx, by);
    EXPECT_EQ(sum, 600u);
    for (std::size_t S : {2u, 3u, 4u}) {
        std::size_t mx = 0, my = 0;
        for (auto v : r.histogram.marginal_x(S)) mx += v;
        for (auto v : r.histogram.marginal_y(S)) my += v;
        EXPECT_EQ(mx, 200u);
        EXPECT_EQ(my, 200u);
    }
    EXPECT_EQ(r.sample_table().rows.size(), 600u);
    EXPECT_EQ(r.bound_table().rows.size(), 101u);
}

TEST(Histogram, EdgesClamp) {
    Histogram2D h(4, {2});
    EXPECT_EQ(h.bin_of(0.0), 0u);
    EXPECT_EQ(h.bin_of(1.0), 3u);
    EXPECT_EQ(h.bin_of(0.25), 1u);
    EXPECT_THROW(Histogram2D(0, {}), Error);
}

TEST(Ranks, Spearman) {
    EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
    EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
    EXPECT_LT(spearman({1, 2, 2, 3}, {1, 2, 3, 4}), 1.0);
}

TEST(Ranks, Violations) {
    EXPECT_EQ(rank_order_violations({1, 2, 3}, {1, 5, 9}), 0u);
    EXPECT_EQ(rank_order_violations({1, 2, 3}, {1, 9, 5}), 1u);
    // ties in x do not constrain y
    EXPECT_EQ(rank_order_violations({1, 2, 2}, {1, 9, 5}), 0u);
}

TEST(Scenario, Presets) {
    for (const char* name : {"fig3", "fig4a", "fig4b", "fig5a", "fig5b"}) {
        const auto s = scenario_preset(name);
        for (const auto& p : s.profiles) EXPECT_EQ(p.size(), s.L);
    }
    EXPECT_THROW(scenario_preset("nope"), Error);
    EXPECT_EQ(scenario_classes(scenario_preset("fig3"), {4, 4}).size(), 9u);
}

TEST(Scenario, SweepIsReproducible) {
    auto s = scenario_preset("fig5a");
    s.u_grid = {0.5, 1.5};
    const auto a = interaction_sweep(s);
    const auto b = interaction_sweep(s);
    ASSERT_EQ(a.tables.size(), b.tables.size());
    for (const auto& [key, t] : a.tables) EXPECT_EQ(to_csv(t), to_csv(b.tables.at(key))) << key;
    EXPECT_TRUE(a.tables.count("correlation"));
}

TEST(Scenario, FirstOrderColumns) {
    auto s = scenario_preset("fig4a");
    s.times = {0.0, 0.5};
    s.u_grid = {0.0, 0.1};
    const auto rec = interaction_sweep(s);
    const auto& sweep = rec.tables.at("u_sweep");
    ASSERT_EQ(sweep.columns.back(), "N1_first_order");
    for (const auto& row : sweep.rows)
        if (row[0] == 0.0) EXPECT_NEAR(row[3], row[4], 1e-10);
}

TEST(Scenario, WriteRecord) {
    auto s = scenario_preset("fig3");
    s.times = {0.0, 1.0};
    const auto rec = interaction_sweep(s);
    const auto dir = std::filesystem::temp_directory_path() / "bosedoi_test_record";
    std::filesystem::remove_all(dir);
    write_record(rec, dir);
    EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
    for (const auto& [key, t] : rec.tables) EXPECT_EQ(read_file(dir / (key + ".csv")), to_csv(t));
    const auto manifest = parse_json(read_file(dir / "manifest.json"));
    EXPECT_EQ(manifest.at("name"), "fig3");
    std::filesystem::remove_all(dir);
}
