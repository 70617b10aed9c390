// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file error.hpp
 * @brief Error codes and the exception type shared by every bosedoi module.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bosedoi {

enum class Errc {
    NegativeOccupation,
    EmptyConfiguration,
    UndefinedDOI,
    InconsistentDensities,
    InvalidImbalance,
    InvalidArgument,
    DimensionOverflow,
    DimensionMismatch,
    BasisMismatch,
    NonHermitianInput,
    DegenerateNormalization,
    DecompositionFailure,
    ConvergenceFailure,
    QuadratureNonConvergence,
    UsageError,
};

constexpr std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::NegativeOccupation: return "NegativeOccupation";
        case Errc::EmptyConfiguration: return "EmptyConfiguration";
        case Errc::UndefinedDOI: return "UndefinedDOI";
        case Errc::InconsistentDensities: return "InconsistentDensities";
        case Errc::InvalidImbalance: return "InvalidImbalance";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::DimensionOverflow: return "DimensionOverflow";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::BasisMismatch: return "BasisMismatch";
        case Errc::NonHermitianInput: return "NonHermitianInput";
        case Errc::DegenerateNormalization: return "DegenerateNormalization";
        case Errc::DecompositionFailure: return "DecompositionFailure";
        case Errc::ConvergenceFailure: return "ConvergenceFailure";
        case Errc::QuadratureNonConvergence: return "QuadratureNonConvergence";
        case Errc::UsageError: return "UsageError";
    }
    return "Unknown";
}

/// Numerical failures (as opposed to rejected input) map to CLI exit code 2.
constexpr bool is_numerical(Errc code) noexcept {
    switch (code) {
        case Errc::DegenerateNormalization:
        case Errc::DecompositionFailure:
        case Errc::ConvergenceFailure:
        case Errc::QuadratureNonConvergence:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace bosedoi
