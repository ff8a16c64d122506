#include "mifdcop/oracle/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "mifdcop/error.hpp"
#include "mifdcop/util/format.hpp"

namespace mifdcop::oracle {

namespace {

// Largest intermediate table variable elimination may build.
constexpr double kEliminationCells = 1 << 24;

using Candidates = std::vector<std::vector<double>>;

// A cost table over candidate indices of `vars` (ascending ids); the last
// variable varies fastest.
struct Factor {
    std::vector<VariableId> vars;
    std::vector<double> values;
};

double space_size(const Candidates& cands) {
    double size = 1.0;
    for (const auto& c : cands) size *= static_cast<double>(c.size());
    return size;
}

std::vector<std::size_t> strides_for(const std::vector<VariableId>& vars, const Candidates& cands) {
    std::vector<std::size_t> strides(vars.size());
    std::size_t s = 1;
    for (std::size_t i = vars.size(); i-- > 0;) {
        strides[i] = s;
        s *= cands[vars[i]].size();
    }
    return strides;
}

// Tabulates one constraint over the candidates of its scope.
Factor tabulate(const Constraint& c, const Candidates& cands) {
    Factor f;
    f.vars.assign(c.scope().begin(), c.scope().end());
    std::size_t cells = 1;
    for (VariableId v : f.vars) cells *= cands[v].size();
    f.values.resize(cells);
    std::vector<std::size_t> idx(f.vars.size(), 0);
    std::vector<double> vals(f.vars.size());
    for (std::size_t cell = 0; cell < cells; ++cell) {
        for (std::size_t i = 0; i < f.vars.size(); ++i) vals[i] = cands[f.vars[i]][idx[i]];
        f.values[cell] = c.evaluate(vals);
        for (std::size_t i = f.vars.size(); i-- > 0;) {
            if (++idx[i] < cands[f.vars[i]].size()) break;
            idx[i] = 0;
        }
    }
    return f;
}

std::string size_report(double size) {
    return format_double(size) + " points exceeds the guard";
}

// Depth-first enumeration in ascending variable order. A constraint is added
// once its highest-id variable is fixed. Only strict improvements replace the
// incumbent, so the first minimizer in lexicographic candidate order wins.
std::vector<std::size_t> enumerate(const Problem& problem, const Candidates& cands) {
    const std::size_t n = problem.num_variables();
    struct Term {
        std::vector<VariableId> vars;  // scope
        std::vector<std::size_t> strides;
        std::vector<double> table;
    };
    std::vector<std::vector<Term>> completes(n);
    for (const Constraint& c : problem.constraints()) {
        Factor f = tabulate(c, cands);
        Term t;
        t.strides = strides_for(f.vars, cands);
        t.vars = f.vars;
        t.table = std::move(f.values);
        const VariableId last = *std::max_element(t.vars.begin(), t.vars.end());
        completes[last].push_back(std::move(t));
    }

    std::vector<std::size_t> pos(n, 0), best(n, 0);
    std::vector<double> partial(n + 1, 0.0);
    double best_cost = std::numeric_limits<double>::infinity();

    auto cost_at = [&](std::size_t depth) {
        double sum = partial[depth];
        for (const Term& t : completes[depth]) {
            std::size_t cell = 0;
            for (std::size_t i = 0; i < t.vars.size(); ++i) cell += pos[t.vars[i]] * t.strides[i];
            sum += t.table[cell];
        }
        return sum;
    };

    // Iterative DFS: pos[depth] is the candidate being tried at depth.
    std::size_t depth = 0;
    while (true) {
        partial[depth + 1] = cost_at(depth);
        if (depth + 1 == n) {
            if (partial[n] < best_cost) {
                best_cost = partial[n];
                best = pos;
            }
        } else {
            ++depth;
            pos[depth] = 0;
            continue;
        }
        // Advance to the next candidate, backtracking as needed.
        while (++pos[depth] == cands[depth].size()) {
            if (depth == 0) return best;
            --depth;
        }
    }
}

// Exact min-sum bucket elimination over the candidate grid. Variables are
// eliminated by minimum degree (lowest id on ties); argmins are kept for
// back-substitution.
std::vector<std::size_t> eliminate(const Problem& problem, const Candidates& cands) {
    const std::size_t n = problem.num_variables();
    std::vector<Factor> factors;
    for (const Constraint& c : problem.constraints()) {
        Factor f = tabulate(c, cands);
        // Reorder to ascending variable ids so scopes merge uniformly.
        std::vector<std::size_t> perm(f.vars.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        std::sort(perm.begin(), perm.end(),
                  [&](std::size_t a, std::size_t b) { return f.vars[a] < f.vars[b]; });
        Factor g;
        for (std::size_t i : perm) g.vars.push_back(f.vars[i]);
        auto old_strides = strides_for(f.vars, cands);
        auto new_strides = strides_for(g.vars, cands);
        g.values.resize(f.values.size());
        std::vector<std::size_t> idx(f.vars.size(), 0);
        for (std::size_t cell = 0; cell < f.values.size(); ++cell) {
            std::size_t rem = cell, target = 0;
            for (std::size_t i = 0; i < f.vars.size(); ++i) {
                idx[i] = rem / old_strides[i];
                rem %= old_strides[i];
            }
            for (std::size_t j = 0; j < g.vars.size(); ++j) target += idx[perm[j]] * new_strides[j];
            g.values[target] = f.values[cell];
        }
        factors.push_back(std::move(g));
    }

    struct Step {
        VariableId var;
        std::vector<VariableId> scope;  // remaining variables the argmin depends on
        std::vector<std::uint32_t> argmin;
    };
    std::vector<Step> steps;
    std::vector<bool> gone(n, false);

    for (std::size_t round = 0; round < n; ++round) {
        // Pick the remaining variable with the fewest distinct factor neighbors.
        VariableId pick = 0;
        std::size_t pick_degree = std::numeric_limits<std::size_t>::max();
        for (VariableId v = 0; v < n; ++v) {
            if (gone[v]) continue;
            std::vector<VariableId> nb;
            for (const Factor& f : factors) {
                if (std::find(f.vars.begin(), f.vars.end(), v) == f.vars.end()) continue;
                for (VariableId u : f.vars) if (u != v) nb.push_back(u);
            }
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
            if (nb.size() < pick_degree) {
                pick_degree = nb.size();
                pick = v;
            }
        }
        gone[pick] = true;

        std::vector<Factor> bucket, rest;
        for (Factor& f : factors) {
            bool has = std::find(f.vars.begin(), f.vars.end(), pick) != f.vars.end();
            (has ? bucket : rest).push_back(std::move(f));
        }
        Step step;
        step.var = pick;
        for (const Factor& f : bucket) {
            for (VariableId u : f.vars) if (u != pick) step.scope.push_back(u);
        }
        std::sort(step.scope.begin(), step.scope.end());
        step.scope.erase(std::unique(step.scope.begin(), step.scope.end()), step.scope.end());

        double cells = 1.0;
        for (VariableId u : step.scope) cells *= static_cast<double>(cands[u].size());
        if (cells * static_cast<double>(cands[pick].size()) > kEliminationCells) {
            throw OracleRefusal("grid elimination needs a table of " +
                                format_double(cells * static_cast<double>(cands[pick].size())) +
                                " cells");
        }

        Factor msg;
        msg.vars = step.scope;
        const auto out_cells = static_cast<std::size_t>(cells);
        msg.values.assign(out_cells, 0.0);
        step.argmin.assign(out_cells, 0);

        // Map each bucket factor's variables to positions in (scope + pick).
        std::vector<std::vector<std::size_t>> strides(bucket.size());
        for (std::size_t b = 0; b < bucket.size(); ++b) strides[b] = strides_for(bucket[b].vars, cands);

        std::vector<std::size_t> sidx(step.scope.size(), 0);
        std::vector<std::size_t> full(n, 0);
        for (std::size_t cell = 0; cell < out_cells; ++cell) {
            for (std::size_t i = 0; i < step.scope.size(); ++i) full[step.scope[i]] = sidx[i];
            double best = std::numeric_limits<double>::infinity();
            std::uint32_t best_at = 0;
            for (std::size_t x = 0; x < cands[pick].size(); ++x) {
                full[pick] = x;
                double sum = 0.0;
                for (std::size_t b = 0; b < bucket.size(); ++b) {
                    std::size_t at = 0;
                    for (std::size_t i = 0; i < bucket[b].vars.size(); ++i) {
                        at += full[bucket[b].vars[i]] * strides[b][i];
                    }
                    sum += bucket[b].values[at];
                }
                if (sum < best) {
                    best = sum;
                    best_at = static_cast<std::uint32_t>(x);
                }
            }
            msg.values[cell] = best;
            step.argmin[cell] = best_at;
            for (std::size_t i = step.scope.size(); i-- > 0;) {
                if (++sidx[i] < cands[step.scope[i]].size()) break;
                sidx[i] = 0;
            }
        }
        if (!msg.vars.empty()) rest.push_back(std::move(msg));
        factors = std::move(rest);
        steps.push_back(std::move(step));
    }

    std::vector<std::size_t> pos(n, 0);
    for (std::size_t s = steps.size(); s-- > 0;) {
        const Step& step = steps[s];
        std::size_t cell = 0;
        auto st = strides_for(step.scope, cands);
        for (std::size_t i = 0; i < step.scope.size(); ++i) cell += pos[step.scope[i]] * st[i];
        pos[step.var] = step.argmin[cell];
    }
    return pos;
}

OracleResult finish(const Problem& problem, const Candidates& cands,
                    const std::vector<std::size_t>& pos) {
    OracleResult r;
    r.assignment.values.resize(problem.num_variables());
    for (std::size_t v = 0; v < pos.size(); ++v) r.assignment.values[v] = cands[v][pos[v]];
    r.cost = evaluate_global(problem, r.assignment);
    return r;
}

std::vector<double> sorted_values(const Domain& d) {
    std::vector<double> vals(d.values().begin(), d.values().end());
    std::sort(vals.begin(), vals.end());
    return vals;
}

}  // namespace

OracleResult brute_force(const Problem& problem, double guard) {
    Candidates cands;
    for (VariableId v = 0; v < problem.num_variables(); ++v) {
        const Domain& d = problem.domain(v);
        if (!d.is_discrete()) {
            throw OracleRefusal("brute force needs discrete variables; x_" + std::to_string(v) +
                                " is continuous");
        }
        cands.push_back(sorted_values(d));
    }
    const double size = space_size(cands);
    if (size > guard) throw OracleRefusal("search space of " + size_report(size));
    if (cands.empty()) return {};
    return finish(problem, cands, enumerate(problem, cands));
}

OracleResult grid_search(const Problem& problem, const GridOptions& options) {
    if (options.points < 2) throw ConfigError("grid search needs at least 2 points per variable");
    if (options.levels < 1) throw ConfigError("grid search needs at least 1 level");
    const std::size_t n = problem.num_variables();
    if (n == 0) return {};

    std::vector<double> lo(n), hi(n);
    for (VariableId v = 0; v < n; ++v) {
        lo[v] = problem.domain(v).lower();
        hi[v] = problem.domain(v).upper();
    }

    OracleResult best;
    best.cost = std::numeric_limits<double>::infinity();
    for (std::uint32_t level = 0; level < options.levels; ++level) {
        Candidates cands(n);
        for (VariableId v = 0; v < n; ++v) {
            const Domain& d = problem.domain(v);
            if (d.is_discrete()) {
                cands[v] = sorted_values(d);
                continue;
            }
            for (std::uint32_t i = 0; i < options.points; ++i) {
                const double t = static_cast<double>(i) / static_cast<double>(options.points - 1);
                cands[v].push_back(i + 1 == options.points ? hi[v] : lo[v] + (hi[v] - lo[v]) * t);
            }
        }
        const double size = space_size(cands);
        bool use_enumeration = options.method == GridMethod::Enumerate ||
                               (options.method == GridMethod::Auto && size <= options.guard);
        if (options.method == GridMethod::Enumerate && size > options.guard) {
            throw OracleRefusal("grid of " + size_report(size));
        }
        OracleResult level_best = finish(
            problem, cands, use_enumeration ? enumerate(problem, cands) : eliminate(problem, cands));
        if (level_best.cost < best.cost) best = std::move(level_best);

        // Halve each continuous window around the incumbent.
        for (VariableId v = 0; v < n; ++v) {
            const Domain& d = problem.domain(v);
            if (d.is_discrete()) continue;
            const double half = (hi[v] - lo[v]) / 4.0;
            const double center = best.assignment.values[v];
            lo[v] = std::max(d.lower(), center - half);
            hi[v] = std::min(d.upper(), center + half);
        }
    }
    return best;
}

}  // namespace mifdcop::oracle
