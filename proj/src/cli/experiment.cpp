#include "mifdcop/cli/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "mifdcop/cli/manifest.hpp"
#include "mifdcop/error.hpp"
#include "mifdcop/model/problem_io.hpp"
#include "mifdcop/runtime/rng.hpp"
#include "mifdcop/util/format.hpp"

namespace fs = std::filesystem;

namespace mifdcop::cli {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
    if (!j.is_object()) throw ConfigError(what + " must be an object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError("unknown key '" + item.key() + "' in " + what);
        }
    }
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) {
            return false;
        }
    }
    return s != "." && s != "..";
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << text;
}

AnytimeTrace load_trace(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("missing trace " + p.string());
    return AnytimeTrace::parse_csv(in);
}

std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }

}  // namespace

ExperimentConfig parse_experiment(const Json& j) {
    ExperimentConfig c;
    try {
        check_keys(j, {"base_seed", "seeds_per_instance", "checkpoints", "round_budget",
                       "benchmarks", "algorithms"},
                   "experiment config");
        if (j.contains("base_seed")) c.base_seed = j.at("base_seed").get<std::uint64_t>();
        if (j.contains("seeds_per_instance")) {
            c.seeds_per_instance = j.at("seeds_per_instance").get<std::uint32_t>();
        }
        if (j.contains("checkpoints")) c.checkpoints = j.at("checkpoints").get<std::vector<std::uint64_t>>();
        if (j.contains("round_budget")) c.round_budget = j.at("round_budget").get<std::uint64_t>();
        for (const Json& b : j.at("benchmarks")) {
            check_keys(b, {"name", "kind", "params", "instances"}, "benchmark");
            ExperimentConfig::Benchmark bench;
            bench.kind = parse_benchmark_kind(b.at("kind").get<std::string>());
            bench.name = b.value("name", to_string(bench.kind));
            if (b.contains("params")) bench.params = b.at("params");
            if (b.contains("instances")) bench.instances = b.at("instances").get<std::uint32_t>();
            c.benchmarks.push_back(std::move(bench));
        }
        for (const Json& a : j.at("algorithms")) {
            check_keys(a, {"label", "algo", "params"}, "algorithm");
            ExperimentConfig::Algo algo;
            algo.algo = parse_algorithm(a.at("algo").get<std::string>());
            algo.label = a.value("label", to_string(algo.algo));
            if (a.contains("params")) algo.params = a.at("params");
            c.algorithms.push_back(std::move(algo));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed experiment config: ") + e.what());
    }
    if (c.benchmarks.empty() || c.algorithms.empty()) {
        throw ConfigError("experiment needs at least one benchmark and one algorithm");
    }
    if (c.seeds_per_instance == 0) throw ConfigError("seeds_per_instance must be >= 1");
    std::set<std::string> names, labels;
    for (const auto& b : c.benchmarks) {
        if (!valid_name(b.name) || !names.insert(b.name).second) {
            throw ConfigError("benchmark names must be unique file-safe names: '" + b.name + "'");
        }
        if (b.instances == 0) throw ConfigError("benchmark '" + b.name + "' has no instances");
    }
    for (const auto& a : c.algorithms) {
        if (!valid_name(a.label) || !labels.insert(a.label).second || a.label == "round") {
            throw ConfigError("algorithm labels must be unique file-safe names: '" + a.label + "'");
        }
    }
    return c;
}

Json to_json(const ExperimentConfig& c) {
    Json j;
    j["base_seed"] = c.base_seed;
    j["seeds_per_instance"] = c.seeds_per_instance;
    j["checkpoints"] = c.checkpoints;
    j["round_budget"] = c.round_budget;
    j["benchmarks"] = Json::array();
    for (const auto& b : c.benchmarks) {
        j["benchmarks"].push_back(
            {{"name", b.name}, {"kind", to_string(b.kind)}, {"params", b.params}, {"instances", b.instances}});
    }
    j["algorithms"] = Json::array();
    for (const auto& a : c.algorithms) {
        j["algorithms"].push_back({{"label", a.label}, {"algo", to_string(a.algo)}, {"params", a.params}});
    }
    return j;
}

std::uint64_t instance_seed(const ExperimentConfig& c, std::size_t bench, std::size_t instance) {
    return derive_seed(c.base_seed, StreamTag::Generator, {bench, instance});
}

std::uint64_t run_seed(const ExperimentConfig& c, std::size_t bench, std::size_t instance,
                       std::size_t seed_index) {
    return derive_seed(c.base_seed, StreamTag::Root, {bench, instance, seed_index});
}

std::string instance_stem(std::size_t instance) {
    std::ostringstream s;
    s << "instance_" << std::setw(3) << std::setfill('0') << instance;
    return s.str();
}

std::string run_stem(std::size_t instance, std::size_t seed_index) {
    std::ostringstream s;
    s << instance_stem(instance) << "_seed_" << std::setw(2) << std::setfill('0') << seed_index;
    return s.str();
}

void run_experiment(const ExperimentConfig& config, const fs::path& out_dir, unsigned workers,
                    std::ostream* log) {
    struct Job {
        fs::path dir;
        std::string stem;
        const Problem* problem;
        Manifest manifest;
    };
    std::vector<std::vector<Problem>> problems(config.benchmarks.size());
    std::vector<Job> jobs;

    // Everything that can fail on bad input happens before the first run.
    for (std::size_t b = 0; b < config.benchmarks.size(); ++b) {
        const auto& bench = config.benchmarks[b];
        for (std::size_t i = 0; i < bench.instances; ++i) {
            problems[b].push_back(generate(bench.kind, bench.params, instance_seed(config, b, i)));
        }
    }
    for (std::size_t b = 0; b < config.benchmarks.size(); ++b) {
        const auto& bench = config.benchmarks[b];
        for (const auto& algo : config.algorithms) {
            for (std::size_t i = 0; i < bench.instances; ++i) {
                AlgorithmSetup setup = resolve_algorithm(algo.algo, algo.params, problems[b][i]);
                for (std::size_t s = 0; s < config.seeds_per_instance; ++s) {
                    Job job;
                    job.dir = out_dir / bench.name / "runs" / algo.label;
                    job.stem = run_stem(i, s);
                    job.problem = &problems[b][i];
                    job.manifest.algorithm = setup;
                    job.manifest.seed = run_seed(config, b, i, s);
                    job.manifest.round_budget = config.round_budget;
                    job.manifest.problem = "../../instances/" + instance_stem(i) + ".json";
                    jobs.push_back(std::move(job));
                }
            }
        }
    }

    fs::create_directories(out_dir);
    write_file(out_dir / "experiment.json", to_json(config).dump(2) + "\n");
    for (std::size_t b = 0; b < config.benchmarks.size(); ++b) {
        for (std::size_t i = 0; i < problems[b].size(); ++i) {
            write_file(out_dir / config.benchmarks[b].name / "instances" / (instance_stem(i) + ".json"),
                       serialize_problem(problems[b][i]));
        }
    }

    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
        while (true) {
            const std::size_t at = next.fetch_add(1);
            if (at >= jobs.size()) return;
            const Job& job = jobs[at];
            try {
                const auto t0 = std::chrono::steady_clock::now();
                RunOutput out = replay(job.manifest, *job.problem);
                const double secs =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                write_file(job.dir / (job.stem + ".trace.csv"), out.trace.to_csv());
                write_file(job.dir / (job.stem + ".manifest.json"), to_json(job.manifest).dump(2) + "\n");
                write_file(job.dir / (job.stem + ".result.json"), result_json(out, secs).dump(2) + "\n");
                if (log) {
                    std::lock_guard lock(log_mutex);
                    *log << "[" << (at + 1) << "/" << jobs.size() << "] " << job.dir.string() << "/"
                         << job.stem << " cost " << format_double(out.best.cost) << "\n";
                }
            } catch (...) {
                std::lock_guard lock(log_mutex);
                if (!failure) failure = std::current_exception();
                next = jobs.size();
                return;
            }
        }
    };
    const unsigned n = std::max(1u, workers);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    aggregate(out_dir);
}

double best_at_iteration(const AnytimeTrace& trace, std::uint64_t iteration) {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (const TraceRow& r : trace.rows()) {
        if (r.iteration > iteration) break;
        best = r.best_cost;
    }
    return best;
}

double sign_test_p(std::uint64_t wins, std::uint64_t losses) {
    const std::uint64_t n = wins + losses;
    if (n == 0) return 1.0;
    const std::uint64_t k = std::min(wins, losses);
    // P(X <= k) for X ~ Binomial(n, 1/2), summed in log space.
    const double log_half_n = -static_cast<double>(n) * std::log(2.0);
    double tail = 0.0;
    for (std::uint64_t i = 0; i <= k; ++i) {
        const double log_c = std::lgamma(static_cast<double>(n) + 1) -
                             std::lgamma(static_cast<double>(i) + 1) -
                             std::lgamma(static_cast<double>(n - i) + 1);
        tail += std::exp(log_c + log_half_n);
    }
    return std::min(1.0, 2.0 * tail);
}

namespace {

struct RunKey {
    std::size_t instance;
    std::size_t seed;
    auto operator<=>(const RunKey&) const = default;
};

// Traces of one (benchmark, algorithm), keyed by run.
std::map<RunKey, AnytimeTrace> load_runs(const fs::path& dir, const ExperimentConfig& config,
                                         const ExperimentConfig::Benchmark& bench,
                                         const std::string& label) {
    std::map<RunKey, AnytimeTrace> runs;
    for (std::size_t i = 0; i < bench.instances; ++i) {
        for (std::size_t s = 0; s < config.seeds_per_instance; ++s) {
            fs::path p = dir / bench.name / "runs" / label / (run_stem(i, s) + ".trace.csv");
            runs.emplace(RunKey{i, s}, load_trace(p));
        }
    }
    return runs;
}

double final_cost(const AnytimeTrace& t) {
    if (t.empty()) throw ConfigError("empty trace");
    return t.rows().back().best_cost;
}

}  // namespace

void aggregate(const fs::path& results_dir) {
    const ExperimentConfig config =
        parse_experiment(Json::parse(read_file(results_dir / "experiment.json")));

    std::ostringstream agg;
    agg << "benchmark,algorithm,runs,mean_final_cost";
    for (auto c : config.checkpoints) agg << ",mean_cost_at_" << c;
    agg << '\n';
    std::ostringstream pairs;
    pairs << "benchmark,algorithm_a,algorithm_b,pairs,mean_difference,wins_a,wins_b,ties,sign_test_p\n";

    for (const auto& bench : config.benchmarks) {
        std::vector<std::map<RunKey, AnytimeTrace>> by_algo;
        for (const auto& algo : config.algorithms) {
            by_algo.push_back(load_runs(results_dir, config, bench, algo.label));
        }
        for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
            const auto& runs = by_algo[a];
            double sum = 0.0;
            for (const auto& [key, t] : runs) sum += final_cost(t);
            agg << bench.name << ',' << config.algorithms[a].label << ',' << runs.size() << ','
                << format_double(sum / static_cast<double>(runs.size()));
            for (auto c : config.checkpoints) {
                double s = 0.0;
                for (const auto& [key, t] : runs) s += best_at_iteration(t, c);
                agg << ',' << cell(s / static_cast<double>(runs.size()));
            }
            agg << '\n';
        }
        for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
            for (std::size_t b = a + 1; b < config.algorithms.size(); ++b) {
                double diff = 0.0;
                std::uint64_t wins = 0, losses = 0, ties = 0;
                for (const auto& [key, ta] : by_algo[a]) {
                    const double x = final_cost(ta);
                    const double y = final_cost(by_algo[b].at(key));
                    diff += x - y;
                    if (x < y) ++wins;
                    else if (x > y) ++losses;
                    else ++ties;
                }
                const auto n = by_algo[a].size();
                pairs << bench.name << ',' << config.algorithms[a].label << ','
                      << config.algorithms[b].label << ',' << n << ','
                      << format_double(diff / static_cast<double>(n)) << ',' << wins << ','
                      << losses << ',' << ties << ',' << format_double(sign_test_p(wins, losses))
                      << '\n';
            }
        }
    }
    write_file(results_dir / "aggregate.csv", agg.str());
    write_file(results_dir / "pairs.csv", pairs.str());
}

void emit_curves(const fs::path& results_dir) {
    if (!fs::exists(results_dir / "experiment.json")) {
        throw ConfigError("no results in " + results_dir.string());
    }
    const ExperimentConfig config =
        parse_experiment(Json::parse(read_file(results_dir / "experiment.json")));

    for (const auto& bench : config.benchmarks) {
        std::vector<std::vector<AnytimeTrace>> traces;
        std::uint64_t last_round = 0;
        for (const auto& algo : config.algorithms) {
            std::vector<AnytimeTrace> runs;
            for (auto& [key, t] : load_runs(results_dir, config, bench, algo.label)) {
                if (t.empty()) throw ConfigError("empty trace in " + bench.name + "/" + algo.label);
                last_round = std::max(last_round, t.rows().back().round);
                runs.push_back(std::move(t));
            }
            traces.push_back(std::move(runs));
        }

        std::ostringstream out;
        out << "round";
        for (const auto& algo : config.algorithms) out << ',' << algo.label;
        out << '\n';

        // Per run: index of the next unread row and its carried-forward best.
        std::vector<std::vector<std::size_t>> cursor(traces.size());
        std::vector<std::vector<double>> current(traces.size());
        for (std::size_t a = 0; a < traces.size(); ++a) {
            cursor[a].assign(traces[a].size(), 0);
            current[a].assign(traces[a].size(), std::numeric_limits<double>::quiet_NaN());
        }
        for (std::uint64_t round = 1; round <= last_round; ++round) {
            bool any = false;
            std::vector<double> means(traces.size(), std::numeric_limits<double>::quiet_NaN());
            for (std::size_t a = 0; a < traces.size(); ++a) {
                double sum = 0.0;
                bool complete = true;
                for (std::size_t r = 0; r < traces[a].size(); ++r) {
                    auto rows = traces[a][r].rows();
                    while (cursor[a][r] < rows.size() && rows[cursor[a][r]].round <= round) {
                        current[a][r] = rows[cursor[a][r]].best_cost;
                        ++cursor[a][r];
                    }
                    if (std::isnan(current[a][r])) complete = false;
                    sum += current[a][r];
                }
                if (complete) {
                    means[a] = sum / static_cast<double>(traces[a].size());
                    any = true;
                }
            }
            if (!any) continue;
            out << round;
            for (double m : means) out << ',' << cell(m);
            out << '\n';
        }
        write_file(results_dir / "curves" / (bench.name + ".csv"), out.str());
    }
}

}  // namespace mifdcop::cli
