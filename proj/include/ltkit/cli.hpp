// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace ltkit::cli {

// Full command surface; argv-style args without the program name.
// Exit codes: 0 success, 1 domain validation failure, 2 usage/config/I-O.
int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace ltkit::cli
