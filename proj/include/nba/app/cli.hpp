#pragma once

#include <ostream>

#include "nba/app/app.hpp"

namespace nba {

/// The `nba` command line. Returns the process exit code; configuration
/// errors print to `err` and return kExitConfig. `deps` is forwarded to the
/// App (tests inject transports there).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const AppDeps& deps = {},
            const EnvLookup& env = process_env());

}  // namespace nba
