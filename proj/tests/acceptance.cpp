// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

// One line per acceptance criterion; exit status 1 if any fails.

#include <bosedoi/verify.hpp>

#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    bool ok = true;
    for (const auto& r : bosedoi::run_checks(quick)) {
        std::cout << bosedoi::format_check(r) << std::endl;
        ok = ok && r.passed;
    }
    std::cout << (ok ? "all acceptance criteria passed" : "acceptance criteria FAILED") << '\n';
    return ok ? 0 : 1;
}
