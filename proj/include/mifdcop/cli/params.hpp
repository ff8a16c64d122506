#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mifdcop/baselines/baselines.hpp"
#include "mifdcop/dpsa/dpsa.hpp"

namespace mifdcop::cli {

using Json = nlohmann::ordered_json;

enum class Algorithm { Dpsa, Dsan, DsaC };

Algorithm parse_algorithm(std::string_view name);  // dpsa | dsan | dsa-c
std::string to_string(Algorithm algo);

bool has_continuous(const Problem& problem);

// Parameter objects use the config field names. Unknown keys are errors.
// `base` supplies every value the JSON leaves out.
dpsa::DpsaConfig dpsa_from_json(const Json& j, dpsa::DpsaConfig base);
Json to_json(const dpsa::DpsaConfig& c);
baselines::DsanConfig dsan_from_json(const Json& j, baselines::DsanConfig base);
Json to_json(const baselines::DsanConfig& c);
baselines::DsaConfig dsa_from_json(const Json& j, baselines::DsaConfig base);
Json to_json(const baselines::DsaConfig& c);

/// An algorithm with every parameter spelled out.
struct AlgorithmSetup {
    Algorithm algo = Algorithm::Dpsa;
    Json params = Json::object();
};

/// Fills unset parameters from the defaults for the problem kind (discrete
/// or continuous/mixed). An optional "preset" key ("auto", "discrete",
/// "continuous") overrides the choice. Validates the result.
AlgorithmSetup resolve_algorithm(Algorithm algo, const Json& overrides, const Problem& problem);

struct RunOutput {
    BestSnapshot best;
    AnytimeTrace trace;
    std::uint64_t rounds = 0;
    std::uint64_t iterations = 0;
    Json details = Json::object();  // algorithm-specific (theta history for DPSA)
};

RunOutput run_algorithm(const Problem& problem, const AlgorithmSetup& setup, std::uint64_t seed,
                        const search::RunOptions& options = {});

Json result_json(const RunOutput& out, double wall_seconds);

}  // namespace mifdcop::cli
