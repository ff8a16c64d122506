#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mifdcop/model/problem.hpp"

namespace mifdcop {

// Problem files are JSON documents:
//
//   {
//     "sense": "minimize",
//     "variables": [
//       {"id": 0, "kind": "discrete", "domain": [0, 1, 2]},
//       {"id": 1, "kind": "continuous", "domain": [-50, 50]}
//     ],
//     "constraints": [
//       {"scope": [0, 2], "table": [5, 2, 7, 1, ...]},
//       {"scope": [0, 1], "expr": "((x_0 * x_1) + I(x_0 == 2))"}
//     ]
//   }
//
// Tables are flat row-major over domain positions (last scope variable
// fastest). A "maximize" problem is negated on load and is saved back as an
// equivalent "minimize" problem. Disconnected constraint graphs are rejected.

Problem parse_problem(std::string_view json_text);
std::string serialize_problem(const Problem& problem);

Problem load_problem(const std::filesystem::path& path);
void save_problem(const Problem& problem, const std::filesystem::path& path);

}  // namespace mifdcop
