#include "mifdcop/cli/manifest.hpp"

#include "mifdcop/error.hpp"

namespace mifdcop::cli {

namespace {
constexpr const char* kFormat = "mifdcop-manifest/1";
}

Json to_json(const Manifest& m) {
    Json j;
    j["format"] = kFormat;
    j["algorithm"] = to_string(m.algorithm.algo);
    j["params"] = m.algorithm.params;
    j["seed"] = m.seed;
    j["round_budget"] = m.round_budget;
    j["problem"] = m.problem;
    return j;
}

Manifest manifest_from_json(const Json& j) {
    try {
        if (j.at("format").get<std::string>() != kFormat) {
            throw ConfigError("unsupported manifest format '" + j.at("format").get<std::string>() + "'");
        }
        Manifest m;
        m.algorithm.algo = parse_algorithm(j.at("algorithm").get<std::string>());
        m.algorithm.params = j.at("params");
        m.seed = j.at("seed").get<std::uint64_t>();
        m.round_budget = j.at("round_budget").get<std::uint64_t>();
        m.problem = j.at("problem").get<std::string>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
}

search::RunOptions run_options(const Manifest& m, unsigned threads) {
    search::RunOptions o;
    o.threads = threads;
    o.max_rounds = m.round_budget;
    return o;
}

RunOutput replay(const Manifest& m, const Problem& problem, unsigned threads) {
    return run_algorithm(problem, m.algorithm, m.seed, run_options(m, threads));
}

}  // namespace mifdcop::cli
