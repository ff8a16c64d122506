#pragma once

// Problem builders and independent reference computations shared by tests.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "mifdcop/dpsa/search.hpp"
#include "mifdcop/model/problem.hpp"

namespace fixtures {

using namespace mifdcop;

// Connected random binary table problem: a random spanning tree plus extra
// edges with probability p. Built directly so tests do not lean on bench.
inline Problem random_table_problem(std::uint32_t n, double p, int d, std::uint64_t seed,
                                    int cost_lo = 0, int cost_hi = 20) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<VariableId, VariableId>> edges;
    for (VariableId v = 1; v < n; ++v) {
        std::uniform_int_distribution<VariableId> pick(0, v - 1);
        VariableId u = pick(rng);
        edges.emplace_back(u, v);
    }
    std::bernoulli_distribution extra(p);
    for (VariableId a = 0; a < n; ++a) {
        for (VariableId b = a + 1; b < n; ++b) {
            if (std::find(edges.begin(), edges.end(), std::make_pair(a, b)) != edges.end()) continue;
            if (extra(rng)) edges.emplace_back(a, b);
        }
    }
    std::uniform_int_distribution<int> cost(cost_lo, cost_hi);
    std::vector<Constraint> cs;
    for (auto [a, b] : edges) {
        std::vector<double> t(static_cast<std::size_t>(d) * d);
        for (double& c : t) c = cost(rng);
        // Randomize scope order so ownership and table layout see both orders.
        if (rng() & 1) cs.push_back(Constraint::table({a, b}, t));
        else cs.push_back(Constraint::table({b, a}, t));
    }
    return Problem(std::vector<Domain>(n, Domain::integer_range(0, d - 1)), std::move(cs));
}

// Connected random binary quadratic problem on [-10, 10].
inline Problem random_quadratic_problem(std::uint32_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-5.0, 5.0);
    std::vector<Constraint> cs;
    auto add = [&](VariableId a, VariableId b) {
        Expression x = Expression::variable(a), y = Expression::variable(b);
        cs.push_back(Constraint::function(
            {a, b}, Expression::constant(coeff(rng)) * pow(x, 2) +
                        Expression::constant(coeff(rng)) * x * y +
                        Expression::constant(coeff(rng)) * pow(y, 2)));
    };
    std::bernoulli_distribution extra(p);
    for (VariableId v = 1; v < n; ++v) add(v - 1, v);
    for (VariableId a = 0; a < n; ++a) {
        for (VariableId b = a + 2; b < n; ++b) {
            if (extra(rng)) add(a, b);
        }
    }
    return Problem(std::vector<Domain>(n, Domain::continuous(-10.0, 10.0)), std::move(cs));
}

inline Assignment random_assignment(const Problem& p, std::mt19937_64& rng) {
    Assignment a;
    for (const Domain& d : p.domains()) {
        if (d.is_discrete()) {
            std::uniform_int_distribution<std::size_t> pick(0, d.size() - 1);
            a.values.push_back(d.values()[pick(rng)]);
        } else {
            a.values.push_back(std::uniform_real_distribution<double>(d.lower(), d.upper())(rng));
        }
    }
    return a;
}

// Table cost computed from the raw row-major layout, without Constraint::evaluate.
inline double table_lookup(const Problem& p, const Constraint& c, const Assignment& a) {
    const auto& table = std::get<CostTable>(c.payload()).costs;
    std::size_t index = 0;
    for (VariableId v : c.scope()) {
        auto vals = p.domain(v).values();
        auto pos = static_cast<std::size_t>(std::find(vals.begin(), vals.end(), a[v]) - vals.begin());
        index = index * vals.size() + pos;
    }
    return table[index];
}

// Independent global cost: tables by direct lookup, functions via evaluate.
inline double resum(const Problem& p, const Assignment& a) {
    double total = 0.0;
    for (const Constraint& c : p.constraints()) {
        if (c.is_table()) {
            total += table_lookup(p, c, a);
        } else {
            std::vector<double> vals;
            for (VariableId v : c.scope()) vals.push_back(a[v]);
            total += c.evaluate(vals);
        }
    }
    return total;
}

inline std::map<VariableId, double> neighbor_map(const Problem& p, VariableId v, const Assignment& a) {
    std::map<VariableId, double> m;
    for (VariableId u : p.neighbors(v)) m[u] = a[u];
    return m;
}

// Records every (call, state) assignment of every replica while a run executes.
struct StateLog {
    // key: (call, state) -> [replica][agent]
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::vector<double>>> states;

    search::RunOptions options() {
        search::RunOptions o;
        o.observer = [this](std::uint64_t, std::span<const search::SearchAgent> agents) {
            for (std::size_t i = 0; i < agents.size(); ++i) {
                const auto& a = agents[i];
                if (!a.in_call() || a.current_state() < 0) continue;
                auto key = std::make_pair(a.current_call(), static_cast<std::uint32_t>(a.current_state()));
                auto& slot = states[key];
                const std::size_t k = a.values().size();
                if (slot.empty()) slot.assign(k, std::vector<double>(agents.size(), 0.0));
                for (std::size_t r = 0; r < k; ++r) slot[r][i] = a.values()[r];
            }
        };
        return o;
    }

    Assignment assignment(std::uint32_t call, std::uint32_t state, std::uint32_t replica) const {
        return Assignment{states.at({call, state}).at(replica)};
    }
};

inline bool close_rel(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace fixtures
