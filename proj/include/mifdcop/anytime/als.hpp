#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mifdcop/model/problem.hpp"
#include "mifdcop/runtime/bfs_tree.hpp"
#include "mifdcop/runtime/network.hpp"

namespace mifdcop {

/// Identifies one visited state: the j-th state of replica k in a search call.
struct StateId {
    std::uint32_t call = 0;
    std::uint32_t replica = 0;
    std::uint32_t state = 0;
    friend bool operator==(const StateId&, const StateId&) = default;
};

struct TraceRow {
    std::uint64_t round = 0;       // round in which the root completed this state's cost
    std::uint64_t iteration = 0;   // search iterations executed before this state
    std::uint32_t call = 0;
    std::uint32_t state = 0;
    double best_cost = 0.0;        // best cost seen so far across calls and replicas
    std::vector<double> costs;     // global cost of this state, per replica
};

/// Per-state anytime record kept at the root.
class AnytimeTrace {
public:
    void append(TraceRow row) { rows_.push_back(std::move(row)); }
    std::span<const TraceRow> rows() const { return rows_; }
    bool empty() const { return rows_.empty(); }

    // Header: round,iteration,call,state,best_cost,cost_0,...,cost_{K-1}
    void write_csv(std::ostream& out) const;
    std::string to_csv() const;
    static AnytimeTrace parse_csv(std::istream& in);

private:
    std::vector<TraceRow> rows_;
};

/// Pipelined tree aggregation of the global cost, one partial vector per
/// replica.
///
/// A node at depth d forwards the partial sum for state j during call-local
/// round j + 1 + (H - d), where H is the tree height; children at depth d+1
/// forwarded it one round earlier, so each partial arrives exactly when
/// needed. The root therefore completes state j in round j + 1 + H, and a
/// best-state announcement reaches depth d in round j + 1 + H + d. After the
/// last state L of a call, 2H + 1 quiet rounds finish both directions.
///
/// Constraints are summed by their owner (lowest id in scope) so each is
/// counted once.
class AlsNode {
public:
    AlsNode(const BfsTree& tree, VariableId self, std::uint32_t replicas);

    static std::uint32_t flush_rounds(std::uint32_t height) { return 2 * height + 1; }

    VariableId self() const { return self_; }
    bool is_root() const { return !parent_; }
    std::uint32_t replicas() const { return replicas_; }

    void begin_call(std::uint32_t call, std::uint32_t length);

    // This agent's value of state `state` per replica; recorded in round `state`.
    void record_values(std::uint32_t state, std::span<const double> values);
    // Owned-constraint cost of state `state` per replica; recorded in round state+1.
    void record_owned_cost(std::uint32_t state, std::span<const double> costs);

    // Call-local round q. Sums the due state's partial with the children's
    // AlsUp messages and forwards it. At the root returns the completed
    // (state, global cost vector) instead.
    struct Completed {
        std::uint32_t state;
        std::vector<double> costs;
    };
    std::optional<Completed> step_up(std::uint32_t round_in_call,
                                     std::span<const Message* const> ups, AgentContext& ctx);

    // Adopt a new best state and pass the announcement to the children.
    void announce(const StateId& id, AgentContext& ctx);
    void apply_down(const Message& down, AgentContext& ctx);

    bool has_best() const { return best_.has_value(); }
    double best_value() const { return best_value_; }
    std::optional<StateId> best_id() const { return best_; }

    // Number of values buffered per replica (O(H)).
    std::size_t history_capacity() const { return history_.size(); }

private:
    double value_at(std::uint32_t state, std::uint32_t replica) const;

    VariableId self_;
    std::optional<VariableId> parent_;
    std::vector<VariableId> children_;
    std::uint32_t depth_;
    std::uint32_t height_;
    std::uint32_t replicas_;

    std::uint32_t call_ = 0;
    std::uint32_t length_ = 0;

    struct Slot {
        std::int64_t state = -1;
        std::vector<double> data;
    };
    std::vector<Slot> history_;  // own values, ring of 2H+3 states
    std::vector<Slot> owned_;    // own costs awaiting forwarding, ring of H+2 states

    std::optional<StateId> best_;
    double best_value_ = 0.0;
};

/// Meta-ALS bookkeeping at the root: best cost per replica within the current
/// call (the learning feedback) and the best state across all calls and
/// replicas (the anytime answer). Ties keep the state completed first; within
/// one state the lower replica index wins.
class AlsTracker {
public:
    explicit AlsTracker(std::uint32_t replicas) : replicas_(replicas) {}

    void begin_call(std::uint32_t call, std::uint64_t iteration_base);

    // Returns the replica that became the new global best, if any.
    std::optional<std::uint32_t> observe(std::uint64_t round, std::uint32_t state,
                                         std::span<const double> costs);

    std::span<const double> call_best() const { return call_best_; }
    bool has_best() const { return best_.has_value(); }
    double best_cost() const { return best_cost_; }
    std::optional<StateId> best_id() const { return best_; }
    const AnytimeTrace& trace() const { return trace_; }

private:
    std::uint32_t replicas_;
    std::uint32_t call_ = 0;
    std::uint64_t iteration_base_ = 0;
    std::vector<double> call_best_;
    std::optional<StateId> best_;
    double best_cost_ = std::numeric_limits<double>::infinity();
    AnytimeTrace trace_;
};

struct BestSnapshot {
    Assignment assignment;
    double cost = 0.0;
    StateId id;
};

/// Collects every agent's adopted best value. The cost is evaluated exactly on
/// the assembled assignment. Throws ProtocolError("no snapshot yet") until
/// every node has adopted the same best state.
BestSnapshot best_snapshot(const Problem& problem, std::span<const AlsNode* const> nodes);

}  // namespace mifdcop
