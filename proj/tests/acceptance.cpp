// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
//   acceptance [results_dir]
//
// Criteria 4 and 5 run through the experiment driver so their manifests and
// traces land in results_dir; 6 and 7 then audit those files.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mifdcop/baselines/baselines.hpp"
#include "mifdcop/bench/generators.hpp"
#include "mifdcop/cli/experiment.hpp"
#include "mifdcop/cli/manifest.hpp"
#include "mifdcop/dpsa/dpsa.hpp"
#include "mifdcop/model/problem_io.hpp"
#include "mifdcop/oracle/oracle.hpp"

namespace fs = std::filesystem;
using namespace mifdcop;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

unsigned workers() {
    if (const char* env = std::getenv("MIFDCOP_WORKERS")) return std::max(1, std::atoi(env));
    return std::max(1u, std::thread::hardware_concurrency());
}

fs::path g_results;

// Every run file of an experiment directory: (stem path without suffix).
std::vector<fs::path> run_stems(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        const std::string s = e.path().string();
        if (s.ends_with(".manifest.json")) out.emplace_back(s.substr(0, s.size() - 14));
    }
    std::sort(out.begin(), out.end());
    return out;
}

AnytimeTrace trace_of(const fs::path& stem) {
    std::ifstream in(stem.string() + ".trace.csv");
    return AnytimeTrace::parse_csv(in);
}

Problem problem_of(const fs::path& stem, const cli::Manifest& m) {
    return parse_problem(slurp(stem.parent_path() / m.problem));
}

cli::Manifest manifest_of(const fs::path& stem) {
    return cli::manifest_from_json(cli::Json::parse(slurp(stem.string() + ".manifest.json")));
}

// C1
Outcome ce_worked_example() {
    const std::vector<double> t = {0.1, 11.1, 22.2, 33.3, 44.4, 55.5, 66.6, 77.7, 88.8, 100};
    const std::vector<double> e = {50, 40, 30, 25, 32, 42, 57, 70, 95, 130};
    auto up = dpsa::update_parameters(dpsa::ThetaVector::uniform(0.1, 100), e, t, 3, 0.4, 0.0, 25);
    const double d0 = std::abs(up.theta.first - 8.86), d1 = std::abs(up.theta.second - 77.76);
    return {d0 <= 1e-2 && d1 <= 1e-2,
            fmt("theta' = [%.6g, %.6g], target [8.86, 77.76], |diff| = [%.3g, %.3g]",
                up.theta.first, up.theta.second, d0, d1)};
}

// C2
Outcome formula_suite() {
    double worst = 0;
    auto track = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };
    for (auto [lo, hi] : std::vector<std::pair<double, double>>{{1, 11}, {2, 4}, {1e-3, 1e3}, {0.37, 0.37}}) {
        for (std::uint32_t len : {2u, 100u, 2500u}) {
            for (std::uint32_t l : {0u, len / 2, len}) {
                const double want = lo + (hi - lo) * (static_cast<double>(len) - l) / len;
                track(dpsa::scheduler(l, 0, false, {}, lo, hi, len, dpsa::FinalScheduler::Linear), want);
            }
        }
    }
    Rng rng(1);
    for (auto [lo, hi] : std::vector<std::pair<double, double>>{{0.1, 100}, {1e-3, 1e3}, {5, 5}}) {
        for (std::size_t k : {2u, 10u, 16u, 25u}) {
            auto ts = dpsa::sample_temperatures(dpsa::ThetaVector::uniform(lo, hi), k,
                                                dpsa::SamplingMode::Stratified, rng);
            track(ts.front(), lo);
            track(ts.back(), hi);
            for (std::size_t i = 1; i < k; ++i) track(ts[i] - ts[i - 1], (hi - lo) / (k - 1));
        }
    }
    for (double best : {250.0, -1234.5, 0.0}) {
        for (double s : {0.0, 0.005, 0.01}) track(dpsa::sensitivity_band(s, best), s * std::abs(best));
    }
    return {worst <= 1e-12, fmt("max abs deviation %.3g", worst)};
}

// C3
Outcome acceptance_law() {
    double worst = 0;
    std::string cells;
    std::uint64_t seed = 31;
    for (double ratio : {-3.0, -1.0, -0.1, 0.0, 1.0}) {
        const double t = 2.0;
        Rng rng(seed++);
        int hits = 0;
        for (int i = 0; i < 100000; ++i) hits += dpsa::anneal_accept(ratio * t, t, rng);
        const double freq = hits / 1e5, want = std::min(1.0, std::exp(ratio));
        worst = std::max(worst, std::abs(freq - want));
        cells += fmt(" %g:%.4f", ratio, freq);
    }
    return {worst <= 0.005, fmt("max |freq - law| = %.4f;", worst) + cells};
}

cli::Json c4_config() {
    return cli::Json::parse(R"({
        "base_seed": 4,
        "seeds_per_instance": 1,
        "checkpoints": [],
        "benchmarks": [{"name": "random-dcop", "kind": "random-dcop",
                        "params": {"n": 10, "p": 0.3, "d": 5}, "instances": 20}],
        "algorithms": [{"label": "dpsa", "algo": "dpsa",
                        "params": {"itr_max": 1200, "r_max": 8, "s_len": 60, "k": 8}}]})");
}

cli::Json c5_config() {
    return cli::Json::parse(R"({
        "base_seed": 5,
        "seeds_per_instance": 1,
        "checkpoints": [500, 1000, 2000],
        "benchmarks": [
            {"name": "wgcp", "kind": "wgcp", "params": {"n": 40, "p": 0.1, "colors": 10}, "instances": 25},
            {"name": "fdcop-quad", "kind": "fdcop-quad", "params": {"n": 20, "p": 0.2}, "instances": 25}],
        "algorithms": [{"label": "dpsa", "algo": "dpsa"}, {"label": "dsan", "algo": "dsan"}]})");
}

// C4
Outcome oracle_closeness() {
    const fs::path dir = g_results / "c4";
    fs::remove_all(dir);
    cli::run_experiment(cli::parse_experiment(c4_config()), dir, workers());
    double dpsa_sum = 0, opt_sum = 0;
    int optimal = 0;
    for (int i = 0; i < 20; ++i) {
        const Problem p = parse_problem(slurp(dir / "random-dcop" / "instances" / (cli::instance_stem(i) + ".json")));
        const double opt = oracle::brute_force(p).cost;
        const double got =
            trace_of(dir / "random-dcop" / "runs" / "dpsa" / cli::run_stem(i, 0)).rows().back().best_cost;
        opt_sum += opt;
        dpsa_sum += got;
        optimal += got == opt;
    }
    const double gap = (dpsa_sum - opt_sum) / opt_sum;
    return {gap <= 0.06, fmt("mean DPSA %.2f vs optimum %.2f, gap %.2f%%, optimal on %d/20", dpsa_sum / 20,
                             opt_sum / 20, 100 * gap, optimal)};
}

// C5
Outcome dsan_dominance() {
    const fs::path dir = g_results / "c5";
    fs::remove_all(dir);
    cli::run_experiment(cli::parse_experiment(c5_config()), dir, workers());
    bool means_ok = true;
    std::uint64_t wins = 0, losses = 0, ties = 0;
    std::string detail;
    for (const char* bench : {"wgcp", "fdcop-quad"}) {
        double a_sum = 0, b_sum = 0;
        std::uint64_t w = 0, l = 0, t = 0;
        for (int i = 0; i < 25; ++i) {
            const fs::path runs = dir / bench / "runs";
            const double a = trace_of(runs / "dpsa" / cli::run_stem(i, 0)).rows().back().best_cost;
            const double b = trace_of(runs / "dsan" / cli::run_stem(i, 0)).rows().back().best_cost;
            a_sum += a;
            b_sum += b;
            w += a < b;
            l += a > b;
            t += a == b;
        }
        means_ok = means_ok && a_sum <= b_sum;
        wins += w;
        losses += l;
        ties += t;
        detail += fmt("%s: DPSA %.6g vs DSAN %.6g, %llu/%llu/%llu win/loss/tie, p=%.4g; ", bench, a_sum / 25,
                      b_sum / 25, (unsigned long long)w, (unsigned long long)l, (unsigned long long)t,
                      cli::sign_test_p(w, l));
    }
    const double p = cli::sign_test_p(wins, losses);
    detail += fmt("pooled %llu/%llu/%llu, p=%.4g", (unsigned long long)wins, (unsigned long long)losses,
                  (unsigned long long)ties, p);
    return {means_ok && p < 0.05, detail};
}

// C6
Outcome anytime_property() {
    std::size_t runs = 0, bad_monotone = 0, bad_exact = 0;
    double worst_trace_rel = 0;
    for (const char* sub : {"c4", "c5"}) {
        for (const fs::path& stem : run_stems(g_results / sub)) {
            ++runs;
            const AnytimeTrace t = trace_of(stem);
            for (std::size_t i = 1; i < t.rows().size(); ++i) {
                if (t.rows()[i].best_cost > t.rows()[i - 1].best_cost) {
                    ++bad_monotone;
                    break;
                }
            }
            const auto m = manifest_of(stem);
            const Problem p = problem_of(stem, m);
            const auto result = cli::Json::parse(slurp(stem.string() + ".result.json"));
            const Assignment a{result.at("assignment").get<std::vector<double>>()};
            const double reported = result.at("best_cost").get<double>();
            if (evaluate_global(p, a) != reported) ++bad_exact;
            const double tb = t.rows().back().best_cost;
            worst_trace_rel = std::max(worst_trace_rel, std::abs(tb - reported) / (1 + std::abs(reported)));
        }
    }
    return {runs == 120 && bad_monotone == 0 && bad_exact == 0 && worst_trace_rel <= 1e-12,
            fmt("%zu runs, %zu non-monotone, %zu inexact snapshots, trace/snapshot rel diff %.3g", runs,
                bad_monotone, bad_exact, worst_trace_rel)};
}

// C7
Outcome determinism() {
    std::size_t runs = 0, replay_diff = 0, order_diff = 0;
    Rng perm_rng(77);
    for (const char* sub : {"c4", "c5"}) {
        for (const fs::path& stem : run_stems(g_results / sub)) {
            ++runs;
            const auto m = manifest_of(stem);
            const Problem p = problem_of(stem, m);
            const std::string stored = slurp(stem.string() + ".trace.csv");
            if (cli::replay(m, p).trace.to_csv() != stored) ++replay_diff;
            auto options = cli::run_options(m);
            options.step_order.resize(p.num_variables());
            std::iota(options.step_order.begin(), options.step_order.end(), 0u);
            std::shuffle(options.step_order.begin(), options.step_order.end(), perm_rng);
            if (cli::run_algorithm(p, m.algorithm, m.seed, options).trace.to_csv() != stored) ++order_diff;
        }
    }
    return {runs == 120 && replay_diff == 0 && order_diff == 0,
            fmt("%zu manifests, %zu replay mismatches, %zu permuted-order mismatches", runs, replay_diff,
                order_diff)};
}

// C8
Outcome local_global_consistency() {
    std::size_t flips = 0, bad = 0;
    double worst = 0;
    Rng rng(8);
    for (std::uint64_t i = 0; i < 50; ++i) {
        Problem p = [&] {
            switch (i % 3) {
                case 0: return bench::gen_random_dcop({12, 0.3, 5, 1, 100}, i);
                case 1: return bench::gen_binary_quadratic_fdcop({12, 0.3}, i);
                default: return bench::discretize_to_mif(bench::gen_binary_quadratic_fdcop({12, 0.3}, i), 0.5, i);
            }
        }();
        const std::size_t n = p.num_variables();
        Assignment a;
        for (VariableId v = 0; v < n; ++v) {
            a.values.push_back(dpsa::select_next(p.domain(v), p.domain(v).lower(), {}, rng));
        }
        for (int f = 0; f < 200; ++f) {
            const auto v = static_cast<VariableId>(rng() % n);
            const double next = dpsa::select_next(p.domain(v), a[v], {}, rng);
            std::map<VariableId, double> nb;
            for (VariableId u : p.neighbors(v)) nb[u] = a[u];
            const double gain = local_gain(p, v, a[v], next, nb);
            const double before = evaluate_global(p, a);
            Assignment b = a;
            b[v] = next;
            const double delta = before - evaluate_global(p, b);
            const double err = std::abs(delta - gain) / (1 + std::abs(before));
            worst = std::max(worst, err);
            bad += err > 1e-9;
            ++flips;
            a = std::move(b);
        }
    }
    return {flips == 10000 && bad == 0, fmt("%zu flips, %zu violations, max scaled error %.3g", flips, bad, worst)};
}

// C9
Outcome mif_end_to_end() {
    double dpsa_sum = 0, grid_sum = 0, dsan_sum = 0;
    int under_bound = 0;
    for (std::uint64_t i = 0; i < 10; ++i) {
        bench::QuadraticParams qp;
        qp.n = 12;
        const Problem p = bench::discretize_to_mif(bench::gen_binary_quadratic_fdcop(qp, 900 + i), 0.5, 900 + i);
        const double bound = oracle::grid_search(p).cost;
        const double d = dpsa::run_dpsa(p, dpsa::DpsaConfig::continuous_defaults(), 9000 + i).best().cost;
        baselines::DsanConfig sc;
        sc.budget = dpsa::DpsaConfig::continuous_defaults().itr_max;
        const double s = baselines::run_dsan(p, sc, 9000 + i).best.cost;
        dpsa_sum += d;
        grid_sum += bound;
        dsan_sum += s;
        under_bound += d <= bound + 0.1 * std::abs(bound);
    }
    const double limit = grid_sum / 10 + 0.1 * std::abs(grid_sum / 10);
    const bool pass = dpsa_sum / 10 <= limit && dpsa_sum <= dsan_sum;
    return {pass, fmt("mean DPSA %.6g, grid bound %.6g (limit %.6g), DSAN %.6g; within 10%% of bound on %d/10",
                      dpsa_sum / 10, grid_sum / 10, limit, dsan_sum / 10, under_bound)};
}

// C10
Outcome complexity_contract() {
    std::size_t agents = 0, bad_payload = 0, bad_work = 0, bad_als = 0;
    for (std::uint64_t i = 0; i < 4; ++i) {
        const Problem p = i % 2 ? bench::gen_binary_quadratic_fdcop({15, 0.25}, i)
                                : bench::gen_wgcp({20, 0.2, 5, 1, 100}, i);
        dpsa::DpsaConfig c = i % 2 ? dpsa::DpsaConfig::continuous_defaults() : dpsa::DpsaConfig::discrete_defaults();
        c.itr_max = 600;
        c.r_max = 3;
        c.s_len = 50;
        c.k = 6 + 3 * static_cast<std::uint32_t>(i);
        const auto r = dpsa::run_dpsa(p, c, i);
        for (VariableId v = 0; v < p.num_variables(); ++v) {
            ++agents;
            const auto& ct = r.run.counters[v];
            const std::uint64_t degree = p.neighbors(v).size();
            const std::uint64_t states = ct.move_iterations + r.run.calls;
            if (ct.value_broadcasts != states * degree || ct.value_payload != ct.value_broadcasts * c.k) ++bad_payload;
            if (ct.move_evaluations != 2 * degree * c.k * ct.move_iterations) ++bad_work;
        }
        const auto& st = r.run.stats;
        if (st.total_payload(MessageKind::AlsUp) != st.total_messages(MessageKind::AlsUp) * c.k) ++bad_als;
    }
    return {bad_payload == 0 && bad_work == 0 && bad_als == 0,
            fmt("%zu agents: %zu payload, %zu local-work, %zu ALS-size violations", agents, bad_payload, bad_work,
                bad_als)};
}

}  // namespace

int main(int argc, char** argv) {
    g_results = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_results");
    fs::create_directories(g_results);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"C1 cross-entropy worked example", ce_worked_example},
        {"C2 formula suite", formula_suite},
        {"C3 acceptance law", acceptance_law},
        {"C4 oracle closeness", oracle_closeness},
        {"C5 DPSA vs DSAN", dsan_dominance},
        {"C6 anytime property", anytime_property},
        {"C7 determinism", determinism},
        {"C8 local/global consistency", local_global_consistency},
        {"C9 MIF end-to-end", mif_end_to_end},
        {"C10 complexity contract", complexity_contract},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
