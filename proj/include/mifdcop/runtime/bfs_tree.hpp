#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mifdcop/model/problem.hpp"

namespace mifdcop {

struct BfsTree {
    VariableId root = 0;
    std::vector<std::optional<VariableId>> parent;
    std::vector<std::vector<VariableId>> children;  // ascending
    std::vector<std::uint32_t> depth;
    std::uint32_t height = 0;

    std::size_t size() const { return parent.size(); }
};

/// Breadth-first spanning tree of the constraint graph rooted at variable 0.
/// A node's parent is its lowest-id neighbor on the previous level.
/// Throws ValidationError listing the components of a disconnected graph.
BfsTree build_bfs_tree(const Problem& problem);

}  // namespace mifdcop
