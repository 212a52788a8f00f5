// Copyright 2026 The ntfd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace ntfd {

// Exit codes: 0 all checks pass, 1 a check failed, 2 bad configuration or flags.
int cli_main(int argc, char** argv);

}  // namespace ntfd
