#include "mifdcop/dpsa/search.hpp"

#include <string>

#include "mifdcop/error.hpp"

namespace mifdcop::search {

double TemperatureRule::at(std::uint32_t l, std::uint32_t k, std::uint32_t length) const {
    switch (kind) {
        case Kind::PerReplica:
            return dpsa::scheduler(l, k, true, per_replica, t_min, t_max, length, final_kind);
        case Kind::Final:
            return dpsa::scheduler(l, k, false, {}, t_min, t_max, length, final_kind);
        case Kind::Cooling:
            return dpsa::cooling_temperature(cooling, l, budget);
        case Kind::None:
            break;
    }
    throw ConfigError("plan has no temperature rule");
}

double AnnealMove::move(const MoveInput& in) const {
    const double candidate = dpsa::select_next(in.view.domain(), in.current, proposal_, in.rng);
    const double t = in.plan.temperature.at(in.iteration, in.replica, in.plan.length);
    const double gain = in.view.local_cost(in.current, in.neighbor_values) -
                        in.view.local_cost(candidate, in.neighbor_values);
    in.evaluations += 2 * in.view.incident_count();
    return dpsa::anneal_accept(gain, t, in.rng) ? candidate : in.current;
}

SearchAgent::SearchAgent(const Problem& problem, const BfsTree& tree, VariableId self,
                         SearchSettings settings, std::uint64_t seed,
                         std::shared_ptr<Controller> controller)
    : problem_(problem),
      view_(problem, self),
      height_(tree.height),
      children_(tree.children.at(self)),
      settings_(std::move(settings)),
      seed_(seed),
      controller_(std::move(controller)),
      als_(tree, self, settings_.replicas) {
    if (settings_.replicas == 0 || !settings_.move) {
        throw ConfigError("search needs at least one replica and a move rule");
    }
    if (controller_) {
        if (tree.parent.at(self)) {
            throw ConfigError("only the BFS root may own a controller");
        }
        tracker_.emplace(settings_.replicas);
    }
    replica_rngs_.reserve(settings_.replicas);
    for (std::uint32_t k = 0; k < settings_.replicas; ++k) {
        replica_rngs_.push_back(replica_stream(seed, self, k));
    }
    values_.assign(settings_.replicas, 0.0);
    neighbor_values_.assign(static_cast<std::size_t>(settings_.replicas) * view_.degree(), 0.0);
    scratch_.assign(settings_.replicas, 0.0);
}

void SearchAgent::send_plan(std::shared_ptr<const CallPlan> plan, AgentContext& ctx) {
    for (VariableId child : children_) {
        Message m;
        m.kind = plan->request.learning ? MessageKind::TemperatureSet : MessageKind::Control;
        m.call = plan->first_call;
        m.control = plan;
        ctx.send(child, std::move(m));
    }
}

void SearchAgent::schedule(const CallRequest& request, std::uint64_t round, AgentContext& ctx) {
    if (request.repeats == 0) {
        throw ConfigError("a plan must run at least one call");
    }
    auto plan = std::make_shared<CallPlan>();
    plan->request = request;
    plan->first_call = next_call_id_;
    plan->start_round = round + height_ + 1;
    plan->iteration_base = iterations_done_;
    next_call_id_ += request.repeats;
    send_plan(plan, ctx);
    pending_ = std::move(plan);
}

void SearchAgent::broadcast(std::uint32_t state, AgentContext& ctx) {
    for (VariableId nb : view_.neighbors()) {
        Message m;
        m.kind = MessageKind::ValueBroadcast;
        m.call = call_;
        m.state = state;
        m.payload = values_;
        ctx.send(nb, std::move(m));
        counters_.value_broadcasts += 1;
        counters_.value_payload += values_.size();
    }
}

void SearchAgent::start_call(std::uint64_t round, AgentContext& ctx) {
    (void)round;
    const CallRequest& request = plan_->request;
    als_.begin_call(call_, request.length);
    if (tracker_) {
        tracker_->begin_call(call_, plan_->iteration_base +
                                        static_cast<std::uint64_t>(repeat_) * request.length);
    }
    double initial = 0.0;
    if (request.init_from_best) {
        if (!als_.has_best()) {
            throw ProtocolError("agent " + std::to_string(view_.self()) +
                                " has no best state to start from");
        }
        initial = als_.best_value();
    } else {
        Rng init = init_stream(seed_, view_.self(), call_);
        const Domain& d = view_.domain();
        initial = dpsa::select_next(d, d.lower(), dpsa::Proposal{}, init);
    }
    std::fill(values_.begin(), values_.end(), initial);
    state_ = 0;
    als_.record_values(0, values_);
    broadcast(0, ctx);
}

void SearchAgent::finish_call(std::uint64_t round, AgentContext& ctx) {
    const CallRequest request = plan_->request;
    iterations_done_ += request.length;
    state_ = -1;
    std::optional<CallFeedback> feedback;
    if (tracker_) {
        feedback = CallFeedback{call_, tracker_->call_best(), tracker_->best_cost()};
        controller_->on_call_complete(*feedback);
    }
    if (repeat_ + 1 < request.repeats) {
        ++repeat_;
        ++call_;
        call_start_ = round + 1;
        return;
    }
    plan_.reset();
    if (tracker_) {
        if (auto next = controller_->next_plan(*feedback)) {
            schedule(*next, round, ctx);
        } else {
            finished_ = true;
        }
    }
}

void SearchAgent::step(AgentContext& ctx) {
    const std::uint64_t round = ctx.round();
    std::vector<const Message*> ups;
    std::size_t received = 0;
    const std::size_t degree = view_.degree();

    for (const Message& m : ctx.inbox()) {
        switch (m.kind) {
            case MessageKind::TemperatureSet:
            case MessageKind::Control: {
                auto plan = std::dynamic_pointer_cast<const CallPlan>(m.control);
                if (!plan) {
                    throw ProtocolError("control message without a call plan");
                }
                send_plan(plan, ctx);
                pending_ = std::move(plan);
                break;
            }
            case MessageKind::ValueBroadcast: {
                const std::uint64_t q = round - call_start_;
                if (!plan_ || m.call != call_ || m.state + 1 != q) {
                    throw ProtocolError("agent " + std::to_string(view_.self()) +
                                        " got an out-of-step value broadcast");
                }
                const int slot = view_.slot_of(m.from);
                if (slot < 0 || m.payload.size() != settings_.replicas) {
                    throw ProtocolError("malformed value broadcast");
                }
                for (std::uint32_t k = 0; k < settings_.replicas; ++k) {
                    neighbor_values_[k * degree + static_cast<std::size_t>(slot)] = m.payload[k];
                }
                ++received;
                break;
            }
            case MessageKind::AlsUp:
                ups.push_back(&m);
                break;
            case MessageKind::AlsDown:
                als_.apply_down(m, ctx);
                break;
        }
    }

    if (tracker_ && round == 1 && next_call_id_ == 0 && !pending_) {
        schedule(controller_->first_plan(), round, ctx);
    }
    if (pending_ && round == pending_->start_round) {
        plan_ = std::move(pending_);
        pending_.reset();
        repeat_ = 0;
        call_ = plan_->first_call;
        call_start_ = round;
    }
    if (!plan_) {
        if (!ups.empty() || received != 0) {
            throw ProtocolError("agent " + std::to_string(view_.self()) +
                                " got search traffic outside a call");
        }
        return;
    }

    const std::uint64_t q = round - call_start_;
    const std::uint32_t length = plan_->request.length;
    if (q == 0) {
        start_call(round, ctx);
        return;
    }

    if (q <= static_cast<std::uint64_t>(length) + 1) {
        if (received != degree) {
            throw ProtocolError("agent " + std::to_string(view_.self()) + " received " +
                                std::to_string(received) + " of " + std::to_string(degree) +
                                " value broadcasts");
        }
        for (std::uint32_t k = 0; k < settings_.replicas; ++k) {
            std::span<const double> nb(neighbor_values_.data() + k * degree, degree);
            scratch_[k] = view_.owned_cost(values_[k], nb);
        }
        als_.record_owned_cost(static_cast<std::uint32_t>(q - 1), scratch_);
    }

    if (auto done = als_.step_up(static_cast<std::uint32_t>(q), ups, ctx)) {
        if (auto improved = tracker_->observe(round, done->state, done->costs)) {
            als_.announce(StateId{call_, *improved, done->state}, ctx);
        }
    }

    if (q <= length) {
        const auto iteration = static_cast<std::uint32_t>(q);
        for (std::uint32_t k = 0; k < settings_.replicas; ++k) {
            std::span<const double> nb(neighbor_values_.data() + k * degree, degree);
            MoveInput in{view_, plan_->request, k, iteration, values_[k], nb, replica_rngs_[k],
                         counters_.move_evaluations};
            values_[k] = settings_.move->move(in);
        }
        counters_.move_iterations += 1;
        state_ = iteration;
        als_.record_values(iteration, values_);
        broadcast(iteration, ctx);
    }

    if (q == static_cast<std::uint64_t>(length) + AlsNode::flush_rounds(height_)) {
        finish_call(round, ctx);
    }
}

SearchRun run_search(const Problem& problem, const SearchSettings& settings,
                     std::shared_ptr<Controller> controller, std::uint64_t seed,
                     const RunOptions& options) {
    if (!controller) {
        throw ConfigError("run_search needs a controller");
    }
    SearchRun run;
    run.tree = build_bfs_tree(problem);
    const std::size_t n = problem.num_variables();

    std::vector<SearchAgent> agents;
    agents.reserve(n);
    for (VariableId v = 0; v < n; ++v) {
        agents.emplace_back(problem, run.tree, v, settings, seed,
                            v == run.tree.root ? controller : nullptr);
    }
    Network::Options net_options;
    net_options.threads = options.threads;
    net_options.step_order = options.step_order;
    Network network = Network::for_problem(problem, run.tree, net_options);

    const SearchAgent& root = agents[run.tree.root];
    auto step = [&](AgentContext& ctx) { agents[ctx.id()].step(ctx); };
    auto done = [&] {
        if (options.observer) options.observer(network.round(), agents);
        return root.finished();
    };
    run.rounds = network.run_until(step, done, options.max_rounds);
    if (!root.finished()) {
        throw ProtocolError("run did not finish within " + std::to_string(options.max_rounds) +
                            " rounds");
    }

    std::vector<const AlsNode*> nodes;
    nodes.reserve(n);
    for (const auto& a : agents) nodes.push_back(&a.als());
    run.best = best_snapshot(problem, nodes);
    run.trace = root.tracker()->trace();
    run.stats = network.stats();
    for (const auto& a : agents) run.counters.push_back(a.counters());
    run.iterations = root.counters().move_iterations;
    if (!run.trace.empty()) run.calls = run.trace.rows().back().call + 1;
    return run;
}

}  // namespace mifdcop::search
