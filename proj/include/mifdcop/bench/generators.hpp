#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mifdcop/model/problem.hpp"

// Benchmark instance generators. Every generator is a pure function of its
// parameters and seed. Topologies are G(n, p) graphs; disconnected draws are
// rejected and redrawn with the next sub-seed.
namespace mifdcop::bench {

using Edge = std::pair<VariableId, VariableId>;

struct GraphSample {
    std::vector<Edge> edges;  // (i, j) with i < j, lexicographic
    std::uint32_t resamples = 0;
};

GraphSample sample_connected_graph(std::uint32_t n, double p, std::uint64_t seed);

struct RandomDcopParams {
    std::uint32_t n = 10;
    double p = 0.3;
    std::uint32_t d = 5;
    int cost_lo = 1;
    int cost_hi = 100;
};

struct WgcpParams {
    std::uint32_t n = 40;
    double p = 0.1;
    std::uint32_t colors = 10;
    int weight_lo = 1;
    int weight_hi = 100;
};

struct QuadraticParams {
    std::uint32_t n = 20;
    double p = 0.2;
    double coeff_lo = -5.0;
    double coeff_hi = 5.0;
    double domain_lo = -50.0;
    double domain_hi = 50.0;
};

// `resamples`, when given, receives how many disconnected graphs were redrawn.
Problem gen_random_dcop(const RandomDcopParams& params, std::uint64_t seed,
                        std::uint32_t* resamples = nullptr);
Problem gen_wgcp(const WgcpParams& params, std::uint64_t seed, std::uint32_t* resamples = nullptr);
Problem gen_binary_quadratic_fdcop(const QuadraticParams& params, std::uint64_t seed,
                                   std::uint32_t* resamples = nullptr);

// Makes ceil(fraction * n) uniformly chosen variables discrete over
// {lo, ..., hi}. Input must be all-continuous.
Problem discretize_to_mif(const Problem& problem, double fraction, std::uint64_t seed,
                          int lo = -20, int hi = 20);

}  // namespace mifdcop::bench
