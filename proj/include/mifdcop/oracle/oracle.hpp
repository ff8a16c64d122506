#pragma once

#include <cstdint>

#include "mifdcop/model/problem.hpp"

// Reference solvers for desk-scale verification.
namespace mifdcop::oracle {

inline constexpr double kSearchGuard = 1e8;

struct OracleResult {
    Assignment assignment;
    double cost = 0.0;  // evaluate_global(assignment)
};

/// Exact minimum by full enumeration. Ties go to the lexicographically
/// smallest assignment. Refuses continuous variables and spaces above the guard.
OracleResult brute_force(const Problem& problem, double guard = kSearchGuard);

enum class GridMethod {
    Auto,       // enumerate when the grid fits the guard, else eliminate
    Enumerate,  // always enumerate (refuses above the guard)
    Eliminate,  // always use exact min-sum variable elimination over the grid
};

struct GridOptions {
    std::uint32_t points = 11;  // per continuous variable, endpoints included
    std::uint32_t levels = 5;   // grid passes; each later pass halves the span
    GridMethod method = GridMethod::Auto;
    double guard = kSearchGuard;
};

/// Best grid point after iterative refinement around the incumbent. Discrete
/// variables keep their full domain on every pass. The cost is an upper bound
/// on the optimum.
OracleResult grid_search(const Problem& problem, const GridOptions& options = {});

}  // namespace mifdcop::oracle
