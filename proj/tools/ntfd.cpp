// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#include "ntfd/cli.hpp"

int main(int argc, char** argv) { return ntfd::cli_main(argc, argv); }
