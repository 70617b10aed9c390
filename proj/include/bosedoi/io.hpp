// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief JSON and CSV serialization plus atomic file output.
 *
 * Configuration JSON: {"L": 2, "S": 2, "occupations": [[3, 1], [1, 3]]}
 * (L rows of S entries). CSV files carry a header row; real numbers are
 * printed in e-notation with 17 significant digits.
 */

#pragma once

#include <bosedoi/error.hpp>
#include <bosedoi/fock.hpp>
#include <bosedoi/freedyn.hpp>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace bosedoi {

using json = nlohmann::json;

inline constexpr const char* version_tag = "bosedoi 0.1.0";

/// Column-labelled table of reals.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row) {
        if (row.size() != columns.size()) throw Error(Errc::DimensionMismatch, "row width does not match header");
        rows.push_back(std::move(row));
    }
};

/// 17 significant digits in e-notation.
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

inline std::string to_csv(const Table& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_real(row[i]);
        os << '\n';
    }
    return os.str();
}

/// Writes to a sibling temporary file, then renames over @p path.
inline void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::InvalidArgument, "cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw Error(Errc::InvalidArgument, "failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::InvalidArgument, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json config_to_json(const FockConfiguration& c) {
    return json{{"L", c.modes()}, {"S", c.species()}, {"occupations", c.rows()}};
}

inline FockConfiguration config_from_json(const json& j) {
    if (!j.is_object() || !j.contains("occupations"))
        throw Error(Errc::InvalidArgument, "configuration JSON needs an \"occupations\" array");
    std::vector<std::vector<int>> rows;
    try {
        rows = j.at("occupations").get<std::vector<std::vector<int>>>();
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, std::string("malformed occupations: ") + e.what());
    }
    auto cfg = make_config(rows);
    if (j.contains("L") && j.at("L").get<std::size_t>() != cfg.modes())
        throw Error(Errc::DimensionMismatch, "\"L\" does not match the occupation rows");
    if (j.contains("S") && j.at("S").get<std::size_t>() != cfg.species())
        throw Error(Errc::DimensionMismatch, "\"S\" does not match the occupation columns");
    return cfg;
}

/// Accepts a single configuration object or an array of them.
inline std::vector<FockConfiguration> configs_from_json(const json& j) {
    std::vector<FockConfiguration> out;
    if (j.is_array()) {
        for (const auto& item : j) out.push_back(config_from_json(item));
    } else {
        out.push_back(config_from_json(j));
    }
    return out;
}

inline json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, std::string("invalid JSON: ") + e.what());
    }
}

/// Sites are reported 1-based, matching the CLI.
inline json report_to_json(const FluctuationReport& r) {
    return json{{"site", r.site + 1},         {"I", r.I},
                {"F", r.F},                   {"delta_bar", r.delta_bar},
                {"delta0", r.delta0},         {"delta1", r.delta1},
                {"bound_approx", r.bound_approx}, {"bound_rigorous", r.bound_rigorous}};
}

inline Table report_table() {
    return Table{{"I", "F", "delta_bar", "delta0", "delta1", "bound_approx", "bound_rigorous"}, {}};
}

inline std::vector<double> report_row(const FluctuationReport& r) {
    return {r.I, r.F, r.delta_bar, r.delta0, r.delta1, r.bound_approx, r.bound_rigorous};
}

}  // namespace bosedoi
