#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mifdcop/cli/benchmarks.hpp"
#include "mifdcop/cli/params.hpp"

// Experiment driver. Results directory layout:
//
//   experiment.json                      copy of the config
//   <bench>/instances/instance_XXX.json  generated problems
//   <bench>/runs/<label>/instance_XXX_seed_YY.{trace.csv,manifest.json,result.json}
//   aggregate.csv, pairs.csv             written by aggregate()
//   curves/<bench>.csv                   written by emit_curves()
namespace mifdcop::cli {

struct ExperimentConfig {
    struct Benchmark {
        std::string name;
        BenchmarkKind kind = BenchmarkKind::RandomDcop;
        Json params = Json::object();
        std::uint32_t instances = 1;
    };
    struct Algo {
        std::string label;
        Algorithm algo = Algorithm::Dpsa;
        Json params = Json::object();
    };

    std::uint64_t base_seed = 1;
    std::uint32_t seeds_per_instance = 1;
    std::vector<std::uint64_t> checkpoints;  // iteration counts
    std::uint64_t round_budget = 50'000'000;
    std::vector<Benchmark> benchmarks;
    std::vector<Algo> algorithms;
};

ExperimentConfig parse_experiment(const Json& j);
Json to_json(const ExperimentConfig& c);

std::uint64_t instance_seed(const ExperimentConfig& c, std::size_t bench, std::size_t instance);
std::uint64_t run_seed(const ExperimentConfig& c, std::size_t bench, std::size_t instance,
                       std::size_t seed_index);

std::string instance_stem(std::size_t instance);
std::string run_stem(std::size_t instance, std::size_t seed_index);

/// Generates instances, resolves every algorithm against them (so bad
/// parameters fail before any run), runs the grid on `workers` threads, then
/// writes the aggregate tables.
void run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                    unsigned workers = 1, std::ostream* log = nullptr);

/// Best cost at or before `iteration`; NaN when the trace has no row yet.
double best_at_iteration(const AnytimeTrace& trace, std::uint64_t iteration);

/// Exact two-sided sign test; ties are dropped before calling.
double sign_test_p(std::uint64_t wins, std::uint64_t losses);

/// Recomputes aggregate.csv and pairs.csv from the trace files alone.
void aggregate(const std::filesystem::path& results_dir);

/// Writes curves/<bench>.csv: round, then mean best cost per algorithm.
void emit_curves(const std::filesystem::path& results_dir);

}  // namespace mifdcop::cli
