#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "mifdcop/model/problem.hpp"
#include "mifdcop/runtime/bfs_tree.hpp"
#include "mifdcop/runtime/message.hpp"

namespace mifdcop {

class WorkerPool;

/// What one agent sees during one round. Messages sent now are delivered at
/// the start of the next round.
class AgentContext {
public:
    VariableId id() const { return id_; }
    std::uint64_t round() const { return round_; }
    std::span<const Message> inbox() const { return *inbox_; }

    void send(VariableId to, Message message) {
        message.from = id_;
        outbox_.emplace_back(to, std::move(message));
    }

private:
    friend class Network;
    VariableId id_ = 0;
    std::uint64_t round_ = 0;
    const std::vector<Message>* inbox_ = nullptr;
    std::vector<std::pair<VariableId, Message>> outbox_;
};

struct MessageStats {
    // Indexed [agent][kind].
    std::vector<std::array<std::uint64_t, kMessageKinds>> messages;
    std::vector<std::array<std::uint64_t, kMessageKinds>> payload_values;

    std::uint64_t total_messages(MessageKind kind) const;
    std::uint64_t total_payload(MessageKind kind) const;
};

/// Synchronous in-process message passing between agents.
///
/// Round r: every agent reads the messages sent to it during round r-1, then
/// steps. Inboxes are ordered by sender id, then send order, so results do
/// not depend on the order (or thread) in which agents are stepped.
struct NetworkOptions {
    unsigned threads = 1;
    // Stepping order for the single-threaded path; empty means ascending ids.
    std::vector<VariableId> step_order;
};

class Network {
public:
    using Options = NetworkOptions;

    using StepFn = std::function<void(AgentContext&)>;

    // `allowed[i]`: agents that i may message (ascending).
    explicit Network(std::vector<std::vector<VariableId>> allowed);
    Network(std::vector<std::vector<VariableId>> allowed, Options options);
    ~Network();

    // Allowed destinations: constraint neighbors plus BFS-tree parent/children.
    static Network for_problem(const Problem& problem, const BfsTree& tree, Options options = {});

    std::size_t size() const { return allowed_.size(); }
    // Rounds executed so far; the next round to run is round() + 1.
    std::uint64_t round() const { return round_; }

    void run_rounds(const StepFn& step, std::uint64_t rounds);
    // Runs until `done()` holds after a round or `max_rounds` have run; returns rounds run.
    std::uint64_t run_until(const StepFn& step, const std::function<bool()>& done,
                            std::uint64_t max_rounds);

    // Messages waiting for delivery in the next round.
    std::span<const Message> pending(VariableId agent) const { return inboxes_[agent]; }

    const MessageStats& stats() const { return stats_; }

private:
    void run_one(const StepFn& step);

    std::vector<std::vector<VariableId>> allowed_;
    Options options_;
    std::vector<std::vector<Message>> inboxes_;
    std::vector<AgentContext> contexts_;
    std::uint64_t round_ = 0;
    MessageStats stats_;
    std::unique_ptr<WorkerPool> pool_;
};

}  // namespace mifdcop
