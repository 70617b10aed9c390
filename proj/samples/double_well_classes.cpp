// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

// Lists the non-equivalent two-species configurations of N bosons in a
// double well with their DOI and normalized fluctuation F.
//
//   double_well_classes [N] [M]

#include <bosedoi/fock.hpp>
#include <bosedoi/freedyn.hpp>

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
    const int N = argc > 1 ? std::atoi(argv[1]) : 8;
    const int M = argc > 2 ? std::atoi(argv[2]) : 0;
    try {
        const auto avg = bosedoi::averaged_coefficients(bosedoi::Propagator(bosedoi::hardwall_chain(2, 1.0)), 0);
        std::printf("%6s %6s %8s %8s\n", "delta1", "delta2", "I", "F");
        for (const auto& c : bosedoi::nonequivalent_double_well(N, M)) {
            if (!c.doi) {
                std::printf("%6d %6d %8s %8s\n", c.delta1, c.delta2, "-", "-");
                continue;
            }
            const auto r = bosedoi::normalized_fluctuation(c.config, avg);
            std::printf("%6d %6d %8.5f %8.5f\n", c.delta1, c.delta2, *c.doi, r.F);
        }
    } catch (const bosedoi::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
    return 0;
}
