#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mifdcop/anytime/als.hpp"
#include "mifdcop/dpsa/annealing.hpp"
#include "mifdcop/model/problem.hpp"
#include "mifdcop/runtime/bfs_tree.hpp"
#include "mifdcop/runtime/network.hpp"
#include "mifdcop/runtime/rng.hpp"

// Distributed local-search engine shared by DPSA and the baselines.
//
// Every agent runs the same round-driven protocol. The root receives call
// plans from a Controller and pushes them down the BFS tree; all agents start
// a call in the same round. A call of length L takes L + 2H + 2 rounds:
//
//   round 0        replicas initialized, values broadcast
//   rounds 1..L    neighbor values read, owned costs fed to the ALS
//                  pipeline, one move per replica, values broadcast
//   rounds L+1..   no moves; the ALS pipeline drains (2H + 1 rounds)
//
// so every visited state of every replica is costed exactly at the root.
namespace mifdcop::search {

struct TemperatureRule {
    enum class Kind { PerReplica, Final, Cooling, None };
    Kind kind = Kind::None;
    std::vector<double> per_replica;  // PerReplica
    double t_min = 0.0;               // Final
    double t_max = 0.0;
    dpsa::FinalScheduler final_kind = dpsa::FinalScheduler::Linear;
    dpsa::CoolingSchedule cooling = dpsa::CoolingSchedule::MaxIterOverISq;  // Cooling
    std::uint32_t budget = 0;

    // Temperature at iteration l (1-based) of replica k in a call of length L.
    double at(std::uint32_t l, std::uint32_t k, std::uint32_t length) const;
};

/// What the root asks every agent to do next.
struct CallRequest {
    std::uint32_t length = 0;       // iterations per call
    std::uint32_t repeats = 1;      // back-to-back calls with the same plan
    bool init_from_best = false;    // else: one shared random value per agent
    bool learning = false;          // sent as TemperatureSet rather than Control
    TemperatureRule temperature;
};

struct CallPlan : ControlPayload {
    CallRequest request;
    std::uint32_t first_call = 0;
    std::uint64_t start_round = 0;
    std::uint64_t iteration_base = 0;
};

struct CallFeedback {
    std::uint32_t call = 0;
    std::span<const double> call_best;  // per replica best cost of this call
    double best_cost = 0.0;             // best across everything so far
};

/// Root-side decision logic. Only the BFS root's agent owns one.
class Controller {
public:
    virtual ~Controller() = default;
    virtual CallRequest first_plan() = 0;
    virtual void on_call_complete(const CallFeedback& feedback) { (void)feedback; }
    // Called after the last repeat of a plan; nullopt ends the run.
    virtual std::optional<CallRequest> next_plan(const CallFeedback& feedback) = 0;
};

struct MoveInput {
    const LocalView& view;
    const CallRequest& plan;
    std::uint32_t replica;
    std::uint32_t iteration;  // 1-based within the call
    double current;
    std::span<const double> neighbor_values;  // by neighbor slot
    Rng& rng;
    std::uint64_t& evaluations;  // constraint evaluations performed
};

/// One replica's move rule. Stateless; randomness comes from MoveInput::rng.
class MoveRule {
public:
    virtual ~MoveRule() = default;
    virtual double move(const MoveInput& in) const = 0;
};

/// Simulated annealing step: propose via select_next, accept with
/// min(1, exp(gain / t)) against the latest received neighbor values.
class AnnealMove : public MoveRule {
public:
    explicit AnnealMove(dpsa::Proposal proposal) : proposal_(proposal) {}
    double move(const MoveInput& in) const override;

private:
    dpsa::Proposal proposal_;
};

struct SearchSettings {
    std::uint32_t replicas = 1;
    std::shared_ptr<const MoveRule> move;
};

struct AgentCounters {
    std::uint64_t move_iterations = 0;    // iterations in which this agent moved
    std::uint64_t move_evaluations = 0;   // constraint evaluations spent on moves
    std::uint64_t value_broadcasts = 0;
    std::uint64_t value_payload = 0;
};

class SearchAgent {
public:
    SearchAgent(const Problem& problem, const BfsTree& tree, VariableId self,
                SearchSettings settings, std::uint64_t seed,
                std::shared_ptr<Controller> controller);

    void step(AgentContext& ctx);

    bool finished() const { return finished_; }
    const AlsNode& als() const { return als_; }
    const AlsTracker* tracker() const { return tracker_ ? &*tracker_ : nullptr; }
    const AgentCounters& counters() const { return counters_; }
    const LocalView& view() const { return view_; }

    // Observation hooks for tests: the latest recorded state of the current call.
    bool in_call() const { return plan_ != nullptr; }
    std::uint32_t current_call() const { return call_; }
    std::int64_t current_state() const { return state_; }
    std::span<const double> values() const { return values_; }

private:
    void start_call(std::uint64_t round, AgentContext& ctx);
    void broadcast(std::uint32_t state, AgentContext& ctx);
    void finish_call(std::uint64_t round, AgentContext& ctx);
    void send_plan(std::shared_ptr<const CallPlan> plan, AgentContext& ctx);
    void schedule(const CallRequest& request, std::uint64_t round, AgentContext& ctx);

    const Problem& problem_;
    LocalView view_;
    std::uint32_t height_;
    std::vector<VariableId> children_;
    SearchSettings settings_;
    std::uint64_t seed_;
    std::shared_ptr<Controller> controller_;

    AlsNode als_;
    std::optional<AlsTracker> tracker_;

    std::vector<Rng> replica_rngs_;
    std::vector<double> values_;
    std::vector<double> neighbor_values_;  // [replica][slot]
    std::vector<double> scratch_;

    std::shared_ptr<const CallPlan> pending_;
    std::shared_ptr<const CallPlan> plan_;
    std::uint32_t repeat_ = 0;
    std::uint32_t call_ = 0;
    std::uint64_t call_start_ = 0;
    std::int64_t state_ = -1;
    std::uint32_t next_call_id_ = 0;
    std::uint64_t iterations_done_ = 0;
    bool finished_ = false;

    AgentCounters counters_;
};

struct RunOptions {
    unsigned threads = 1;
    std::vector<VariableId> step_order;  // empty: ascending ids
    std::uint64_t max_rounds = 50'000'000;
    // Called after every round (tests use it to log visited states).
    std::function<void(std::uint64_t round, std::span<const SearchAgent> agents)> observer;
};

struct SearchRun {
    BestSnapshot best;
    AnytimeTrace trace;
    std::uint64_t rounds = 0;
    std::uint64_t iterations = 0;  // moves per agent across all calls
    std::uint32_t calls = 0;
    BfsTree tree;
    MessageStats stats;
    std::vector<AgentCounters> counters;
};

/// Runs the protocol on `problem` until the controller ends it.
SearchRun run_search(const Problem& problem, const SearchSettings& settings,
                     std::shared_ptr<Controller> controller, std::uint64_t seed,
                     const RunOptions& options = {});

}  // namespace mifdcop::search
