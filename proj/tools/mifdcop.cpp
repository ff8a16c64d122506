// mifdcop: generate benchmarks, run solvers and experiments.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mifdcop/cli/benchmarks.hpp"
#include "mifdcop/cli/experiment.hpp"
#include "mifdcop/cli/manifest.hpp"
#include "mifdcop/cli/params.hpp"
#include "mifdcop/model/problem_io.hpp"
#include "mifdcop/oracle/oracle.hpp"
#include "mifdcop/util/format.hpp"

namespace fs = std::filesystem;
using namespace mifdcop;
using cli::Json;

namespace {

// Flag values are read as JSON when they parse (numbers, booleans, arrays),
// otherwise as plain strings.
Json flag_value(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    return j.is_discarded() ? Json(text) : j;
}

struct FlagSet {
    std::map<std::string, std::string> values;

    void add(CLI::App& app, const std::string& prefix, std::initializer_list<const char*> keys,
             const std::string& group) {
        for (const char* key : keys) {
            const std::string name = prefix.empty() ? key : prefix + "." + key;
            app.add_option("--" + name, values[name], "")->group(group);
        }
    }

    Json collect(const std::string& prefix) const {
        Json j = Json::object();
        const std::string lead = prefix.empty() ? "" : prefix + ".";
        for (const auto& [name, value] : values) {
            if (value.empty() || name.rfind(lead, 0) != 0) continue;
            j[name.substr(lead.size())] = flag_value(value);
        }
        return j;
    }
};

unsigned env_workers() {
    if (const char* w = std::getenv("MIFDCOP_WORKERS")) {
        const int n = std::atoi(w);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return 1;
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

Json read_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    return Json::parse(in);
}

void print_assignment(const Assignment& a) {
    for (std::size_t v = 0; v < a.size(); ++v) {
        std::cout << "x_" << v << " = " << format_double(a.values[v]) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solvers and experiments for mixed integer functional DCOPs"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a benchmark instance");
    std::string gen_kind, gen_out;
    std::uint64_t gen_seed = 1;
    FlagSet gen_flags;
    gen->add_option("kind", gen_kind, "random-dcop | wgcp | fdcop-quad | mif")->required();
    gen->add_option("-o,--out", gen_out, "Output problem file (default: stdout)");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen_flags.add(*gen, "",
                  {"n", "p", "d", "cost_lo", "cost_hi", "colors", "weight_lo", "weight_hi",
                   "coeff_lo", "coeff_hi", "domain_lo", "domain_hi", "fraction", "discrete_lo",
                   "discrete_hi"},
                  "Generator parameters");

    // solve
    auto* solve = app.add_subcommand("solve", "Run one solver on a problem, or replay a manifest");
    std::string solve_problem, solve_algo = "dpsa", solve_manifest, solve_out;
    std::uint64_t solve_seed = 1, solve_budget = 50'000'000;
    unsigned solve_threads = 1;
    FlagSet algo_flags;
    solve->add_option("problem", solve_problem, "Problem file");
    solve->add_option("--algo", solve_algo, "dpsa | dsan | dsa-c");
    solve->add_option("--seed", solve_seed, "Run seed");
    solve->add_option("--round-budget", solve_budget, "Maximum simulated rounds");
    solve->add_option("--threads", solve_threads, "Worker threads for agent steps");
    solve->add_option("--manifest", solve_manifest, "Replay this manifest instead");
    solve->add_option("--out", solve_out, "Directory for trace.csv, manifest.json, result.json");
    algo_flags.add(*solve, "dpsa",
                   {"preset", "itr_max", "r_max", "s_max", "s_len", "k", "g", "alpha",
                    "sensitivity", "distribution", "theta0", "sampling", "proposal", "sigma",
                    "final_scheduler", "early_termination"},
                   "DPSA parameters");
    algo_flags.add(*solve, "dsan",
                   {"preset", "schedule", "budget", "proposal", "sigma", "constant_temperature"},
                   "DSAN parameters");
    algo_flags.add(*solve, "dsa-c",
                   {"preset", "p", "budget", "proposal", "sigma", "continuous_candidates"},
                   "DSA-C parameters");

    // oracle
    auto* orc = app.add_subcommand("oracle", "Exact optimum (discrete) or grid bound (continuous)");
    std::string orc_problem;
    oracle::GridOptions grid;
    orc->add_option("problem", orc_problem, "Problem file")->required();
    orc->add_option("--grid-points", grid.points, "Grid points per continuous variable");
    orc->add_option("--grid-levels", grid.levels, "Grid refinement passes");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run an experiment grid from a config file");
    std::string exp_config, exp_out = "results";
    unsigned exp_workers = env_workers();
    exp->add_option("config", exp_config, "Experiment config (JSON)")->required();
    exp->add_option("--out", exp_out, "Results directory");
    exp->add_option("--workers", exp_workers, "Parallel runs (default: $MIFDCOP_WORKERS or 1)");

    // curves
    auto* curves = app.add_subcommand("curves", "Write plot data from a results directory");
    std::string curves_dir;
    curves->add_option("results", curves_dir, "Results directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            Problem p = cli::generate(cli::parse_benchmark_kind(gen_kind), gen_flags.collect(""), gen_seed);
            const std::string text = serialize_problem(p);
            if (gen_out.empty()) {
                std::cout << text;
            } else {
                write_text(gen_out, text);
            }
        } else if (*solve) {
            cli::Manifest manifest;
            Problem problem = [&] {
                if (!solve_manifest.empty()) {
                    manifest = cli::manifest_from_json(read_json(solve_manifest));
                    return load_problem(fs::path(solve_manifest).parent_path() / manifest.problem);
                }
                if (solve_problem.empty()) throw std::runtime_error("solve needs a problem file or --manifest");
                return load_problem(solve_problem);
            }();
            if (solve_manifest.empty()) {
                const auto algo = cli::parse_algorithm(solve_algo);
                manifest.algorithm = cli::resolve_algorithm(algo, algo_flags.collect(cli::to_string(algo)), problem);
                manifest.seed = solve_seed;
                manifest.round_budget = solve_budget;
                const fs::path out_dir = solve_out.empty() ? fs::path(".") : fs::path(solve_out);
                manifest.problem =
                    fs::relative(fs::absolute(solve_problem), fs::absolute(out_dir)).generic_string();
            }
            const auto t0 = std::chrono::steady_clock::now();
            cli::RunOutput out = cli::replay(manifest, problem, solve_threads);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (!solve_out.empty()) {
                const fs::path dir(solve_out);
                write_text(dir / "trace.csv", out.trace.to_csv());
                write_text(dir / "result.json", cli::result_json(out, secs).dump(2) + "\n");
                if (solve_manifest.empty()) {
                    write_text(dir / "manifest.json", cli::to_json(manifest).dump(2) + "\n");
                }
            }
            std::cout << "algorithm: " << cli::to_string(manifest.algorithm.algo) << "\n"
                      << "best cost: " << format_double(out.best.cost) << "\n"
                      << "rounds: " << out.rounds << "\n"
                      << "iterations: " << out.iterations << "\n";
            print_assignment(out.best.assignment);
        } else if (*orc) {
            Problem problem = load_problem(orc_problem);
            const bool discrete = !cli::has_continuous(problem);
            oracle::OracleResult r = discrete ? oracle::brute_force(problem) : oracle::grid_search(problem, grid);
            std::cout << (discrete ? "optimum: " : "grid upper bound: ") << format_double(r.cost) << "\n";
            print_assignment(r.assignment);
        } else if (*exp) {
            const auto config = cli::parse_experiment(read_json(exp_config));
            cli::run_experiment(config, exp_out, exp_workers, &std::cerr);
            std::cout << "results written to " << exp_out << "\n";
        } else if (*curves) {
            cli::emit_curves(curves_dir);
            std::cout << "curves written to " << (fs::path(curves_dir) / "curves").string() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
