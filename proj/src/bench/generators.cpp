#include "mifdcop/bench/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "mifdcop/error.hpp"
#include "mifdcop/runtime/rng.hpp"

namespace mifdcop::bench {

namespace {

// Sub-stream ids under StreamTag::Generator.
constexpr std::uint64_t kGraphStream = 1;
constexpr std::uint64_t kPayloadStream = 2;
constexpr std::uint64_t kDiscretizeStream = 3;
constexpr std::uint32_t kMaxResamples = 100000;

void check_graph_params(std::uint32_t n, double p) {
    if (n < 2) throw ConfigError("generators need n >= 2, got " + std::to_string(n));
    if (!(p > 0.0) || p > 1.0) throw ConfigError("edge density must lie in (0, 1]");
}

bool connected(std::uint32_t n, const std::vector<Edge>& edges) {
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::uint32_t components = n;
    for (auto [a, b] : edges) {
        auto ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    return components == 1;
}

}  // namespace

GraphSample sample_connected_graph(std::uint32_t n, double p, std::uint64_t seed) {
    check_graph_params(n, p);
    GraphSample out;
    for (std::uint32_t attempt = 0; attempt < kMaxResamples; ++attempt) {
        Rng rng(derive_seed(seed, StreamTag::Generator, {kGraphStream, attempt}));
        std::vector<Edge> edges;
        for (VariableId i = 0; i < n; ++i) {
            for (VariableId j = i + 1; j < n; ++j) {
                if (uniform01(rng) < p) edges.emplace_back(i, j);
            }
        }
        if (connected(n, edges)) {
            out.edges = std::move(edges);
            out.resamples = attempt;
            return out;
        }
    }
    throw ConfigError("no connected G(" + std::to_string(n) + ", " + std::to_string(p) +
                      ") graph after " + std::to_string(kMaxResamples) + " draws");
}

Problem gen_random_dcop(const RandomDcopParams& params, std::uint64_t seed,
                        std::uint32_t* resamples) {
    if (params.d < 2) throw ConfigError("domain size must be >= 2");
    if (params.cost_lo > params.cost_hi) throw ConfigError("empty cost range");
    GraphSample g = sample_connected_graph(params.n, params.p, seed);
    if (resamples) *resamples = g.resamples;

    const int d = static_cast<int>(params.d);
    std::vector<Domain> domains(params.n, Domain::integer_range(0, d - 1));
    Rng rng(derive_seed(seed, StreamTag::Generator, {kPayloadStream}));
    std::uniform_int_distribution<int> cost(params.cost_lo, params.cost_hi);
    std::vector<Constraint> constraints;
    constraints.reserve(g.edges.size());
    for (auto [a, b] : g.edges) {
        std::vector<double> table(static_cast<std::size_t>(d) * d);
        for (double& c : table) c = cost(rng);
        constraints.push_back(Constraint::table({a, b}, std::move(table)));
    }
    return Problem(std::move(domains), std::move(constraints));
}

Problem gen_wgcp(const WgcpParams& params, std::uint64_t seed, std::uint32_t* resamples) {
    if (params.colors < 2) throw ConfigError("need at least 2 colors");
    if (params.weight_lo > params.weight_hi) throw ConfigError("empty weight range");
    GraphSample g = sample_connected_graph(params.n, params.p, seed);
    if (resamples) *resamples = g.resamples;

    const int d = static_cast<int>(params.colors);
    std::vector<Domain> domains(params.n, Domain::integer_range(0, d - 1));
    Rng rng(derive_seed(seed, StreamTag::Generator, {kPayloadStream}));
    std::uniform_int_distribution<int> weight(params.weight_lo, params.weight_hi);
    std::vector<Constraint> constraints;
    constraints.reserve(g.edges.size());
    for (auto [a, b] : g.edges) {
        const double w = weight(rng);
        std::vector<double> table(static_cast<std::size_t>(d) * d, 0.0);
        for (int c = 0; c < d; ++c) table[static_cast<std::size_t>(c) * d + c] = w;
        constraints.push_back(Constraint::table({a, b}, std::move(table)));
    }
    return Problem(std::move(domains), std::move(constraints));
}

Problem gen_binary_quadratic_fdcop(const QuadraticParams& params, std::uint64_t seed,
                                   std::uint32_t* resamples) {
    if (params.coeff_lo > params.coeff_hi) throw ConfigError("empty coefficient range");
    if (!std::isfinite(params.domain_lo) || !std::isfinite(params.domain_hi) ||
        !(params.domain_lo < params.domain_hi)) {
        throw ConfigError("quadratic domain needs finite bounds with lo < hi");
    }
    GraphSample g = sample_connected_graph(params.n, params.p, seed);
    if (resamples) *resamples = g.resamples;

    std::vector<Domain> domains(params.n, Domain::continuous(params.domain_lo, params.domain_hi));
    Rng rng(derive_seed(seed, StreamTag::Generator, {kPayloadStream}));
    std::uniform_real_distribution<double> coeff(params.coeff_lo, params.coeff_hi);
    std::vector<Constraint> constraints;
    constraints.reserve(g.edges.size());
    for (auto [a, b] : g.edges) {
        const double ca = coeff(rng);
        const double cb = coeff(rng);
        const double cc = coeff(rng);
        Expression x = Expression::variable(a);
        Expression y = Expression::variable(b);
        Expression f = Expression::constant(ca) * pow(x, 2) + Expression::constant(cb) * x * y +
                       Expression::constant(cc) * pow(y, 2);
        constraints.push_back(Constraint::function({a, b}, std::move(f)));
    }
    return Problem(std::move(domains), std::move(constraints));
}

Problem discretize_to_mif(const Problem& problem, double fraction, std::uint64_t seed, int lo,
                          int hi) {
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw ConfigError("discrete fraction must lie in (0, 1]");
    }
    if (lo > hi) throw ConfigError("empty discrete range");
    const std::size_t n = problem.num_variables();
    for (VariableId v = 0; v < n; ++v) {
        if (problem.domain(v).is_discrete()) {
            throw ConfigError("discretize_to_mif expects an all-continuous problem; x_" +
                              std::to_string(v) + " is discrete");
        }
    }
    const auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));

    std::vector<VariableId> ids(n);
    std::iota(ids.begin(), ids.end(), 0u);
    Rng rng(derive_seed(seed, StreamTag::Generator, {kDiscretizeStream}));
    // Partial Fisher-Yates: the first `count` entries are the chosen variables.
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(ids[i], ids[pick(rng)]);
    }

    std::vector<Domain> domains(problem.domains().begin(), problem.domains().end());
    for (std::size_t i = 0; i < count; ++i) domains[ids[i]] = Domain::integer_range(lo, hi);
    std::vector<Constraint> constraints(problem.constraints().begin(), problem.constraints().end());
    return Problem(std::move(domains), std::move(constraints));
}

}  // namespace mifdcop::bench
