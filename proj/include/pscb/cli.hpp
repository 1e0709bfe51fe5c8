#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "pscb/env.hpp"

namespace pscb {

struct BuiltinSizes {
    int horizon = 5000;
    int num_arms = 6;
    int num_segments = 5;
    int m = 2;
    std::uint64_t seed = 0;  // hard-instance draw
};

// "builtin:synthetic", "builtin:hard" or a segment-table CSV path.
Environment resolve_environment(const std::string& source, const BuiltinSizes& sizes);

// Entry point of the `pscb` tool. Subcommands: run, theory, check-env.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pscb
