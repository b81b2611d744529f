// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace symcap {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Entry point of the `symcap` tool. Results go to `out`, logs to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace symcap
