#pragma once

#include <cstdint>
#include <string>

#include "mifdcop/cli/params.hpp"

namespace mifdcop::cli {

/// Everything needed to rerun one solver run.
struct Manifest {
    AlgorithmSetup algorithm;
    std::uint64_t seed = 0;
    std::uint64_t round_budget = 50'000'000;
    std::string problem;  // problem file, relative to the manifest's directory
};

Json to_json(const Manifest& m);
Manifest manifest_from_json(const Json& j);

search::RunOptions run_options(const Manifest& m, unsigned threads = 1);
RunOutput replay(const Manifest& m, const Problem& problem, unsigned threads = 1);

}  // namespace mifdcop::cli
