// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

// Coincidence probability <N_1 N_2>(t) for one boson per site of a two-site
// chain, same species versus different species. The dip to zero at Jt = pi/4
// is the Hong-Ou-Mandel effect.

#include <bosedoi/freedyn.hpp>

#include <cstdio>
#include <numbers>

int main() {
    const bosedoi::Propagator prop(bosedoi::hardwall_chain(2, 1.0));
    const auto coincidence = bosedoi::TwoParticleObservable::density_product(2, 0, 1);
    const auto same = bosedoi::make_config({{1, 0}, {1, 0}});
    const auto diff = bosedoi::make_config({{1, 0}, {0, 1}});
    std::printf("%8s %12s %12s\n", "Jt", "same", "different");
    for (int k = 0; k <= 16; ++k) {
        const double t = k * std::numbers::pi / 32.0;
        std::printf("%8.4f %12.8f %12.8f\n", t, bosedoi::expectation_2po(same, coincidence, prop, t),
                    bosedoi::expectation_2po(diff, coincidence, prop, t));
    }
    return 0;
}
