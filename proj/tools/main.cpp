// Copyright 2026 The bosedoi Authors
// SPDX-License-Identifier: Apache-2.0

#include <bosedoi/cli.hpp>

int main(int argc, char** argv) { return bosedoi::cli::run(argc, argv); }
