#include "mifdcop/runtime/bfs_tree.hpp"

#include <algorithm>
#include <string>

#include "mifdcop/error.hpp"

namespace mifdcop {

BfsTree build_bfs_tree(const Problem& problem) {
    const std::size_t n = problem.num_variables();
    if (n == 0) {
        throw ValidationError("cannot build a BFS tree over an empty problem");
    }
    auto components = problem.connected_components();
    if (components.size() > 1) {
        std::string msg = "constraint graph is disconnected:";
        for (const auto& comp : components) {
            msg += " {";
            for (std::size_t i = 0; i < comp.size(); ++i) {
                msg += (i ? "," : "") + std::to_string(comp[i]);
            }
            msg += "}";
        }
        throw ValidationError(msg);
    }

    BfsTree tree;
    tree.root = 0;
    tree.parent.assign(n, std::nullopt);
    tree.children.assign(n, {});
    tree.depth.assign(n, 0);
    std::vector<bool> placed(n, false);
    placed[0] = true;

    std::vector<VariableId> level{0};
    std::uint32_t d = 0;
    while (!level.empty()) {
        std::vector<VariableId> next;
        for (VariableId v : level) {
            for (VariableId u : problem.neighbors(v)) {
                if (!placed[u]) {
                    placed[u] = true;
                    next.push_back(u);
                }
            }
        }
        ++d;
        std::sort(next.begin(), next.end());
        for (VariableId u : next) {
            // `level` is ascending, so the first hit is the lowest-id parent.
            for (VariableId p : level) {
                auto nb = problem.neighbors(p);
                if (std::binary_search(nb.begin(), nb.end(), u)) {
                    tree.parent[u] = p;
                    tree.children[p].push_back(u);
                    break;
                }
            }
            tree.depth[u] = d;
        }
        if (!next.empty()) tree.height = d;
        level = std::move(next);
    }
    for (auto& c : tree.children) std::sort(c.begin(), c.end());
    return tree;
}

}  // namespace mifdcop
