#include "mifdcop/anytime/als.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mifdcop/error.hpp"
#include "mifdcop/util/format.hpp"

namespace mifdcop {

void AnytimeTrace::write_csv(std::ostream& out) const {
    std::size_t k = rows_.empty() ? 0 : rows_.front().costs.size();
    out << "round,iteration,call,state,best_cost";
    for (std::size_t i = 0; i < k; ++i) out << ",cost_" << i;
    out << '\n';
    for (const TraceRow& r : rows_) {
        out << r.round << ',' << r.iteration << ',' << r.call << ',' << r.state << ','
            << format_double(r.best_cost);
        for (double c : r.costs) out << ',' << format_double(c);
        out << '\n';
    }
}

std::string AnytimeTrace::to_csv() const {
    std::ostringstream out;
    write_csv(out);
    return out.str();
}

AnytimeTrace AnytimeTrace::parse_csv(std::istream& in) {
    AnytimeTrace trace;
    std::string line;
    if (!std::getline(in, line) || line.rfind("round,iteration,call,state,best_cost", 0) != 0) {
        throw ParseError("trace: missing header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(fields, cell, ',')) cells.push_back(cell);
        if (cells.size() < 5) throw ParseError("trace: short row '" + line + "'");
        TraceRow row;
        try {
            row.round = std::stoull(cells[0]);
            row.iteration = std::stoull(cells[1]);
            row.call = static_cast<std::uint32_t>(std::stoul(cells[2]));
            row.state = static_cast<std::uint32_t>(std::stoul(cells[3]));
            row.best_cost = std::stod(cells[4]);
            for (std::size_t i = 5; i < cells.size(); ++i) row.costs.push_back(std::stod(cells[i]));
        } catch (const std::exception&) {
            throw ParseError("trace: bad row '" + line + "'");
        }
        trace.append(std::move(row));
    }
    return trace;
}

AlsNode::AlsNode(const BfsTree& tree, VariableId self, std::uint32_t replicas)
    : self_(self),
      parent_(tree.parent.at(self)),
      children_(tree.children.at(self)),
      depth_(tree.depth.at(self)),
      height_(tree.height),
      replicas_(replicas),
      history_(2 * tree.height + 3),
      owned_(tree.height + 2) {
    for (auto& s : history_) s.data.assign(replicas, 0.0);
    for (auto& s : owned_) s.data.assign(replicas, 0.0);
}

void AlsNode::begin_call(std::uint32_t call, std::uint32_t length) {
    call_ = call;
    length_ = length;
    for (auto& s : history_) s.state = -1;
    for (auto& s : owned_) s.state = -1;
}

void AlsNode::record_values(std::uint32_t state, std::span<const double> values) {
    Slot& slot = history_[state % history_.size()];
    slot.state = state;
    std::copy(values.begin(), values.end(), slot.data.begin());
}

void AlsNode::record_owned_cost(std::uint32_t state, std::span<const double> costs) {
    Slot& slot = owned_[state % owned_.size()];
    slot.state = state;
    std::copy(costs.begin(), costs.end(), slot.data.begin());
}

double AlsNode::value_at(std::uint32_t state, std::uint32_t replica) const {
    const Slot& slot = history_[state % history_.size()];
    if (slot.state != static_cast<std::int64_t>(state)) {
        throw ProtocolError("agent " + std::to_string(self_) + " no longer holds state " +
                            std::to_string(state));
    }
    return slot.data.at(replica);
}

std::optional<AlsNode::Completed> AlsNode::step_up(std::uint32_t round_in_call,
                                                   std::span<const Message* const> ups,
                                                   AgentContext& ctx) {
    const std::int64_t due = static_cast<std::int64_t>(round_in_call) - 1 -
                             static_cast<std::int64_t>(height_ - depth_);
    if (due < 0 || due > static_cast<std::int64_t>(length_)) {
        if (!ups.empty()) {
            throw ProtocolError("agent " + std::to_string(self_) + " got an unexpected AlsUp");
        }
        return std::nullopt;
    }
    const auto state = static_cast<std::uint32_t>(due);
    const Slot& own = owned_[state % owned_.size()];
    if (own.state != due) {
        throw ProtocolError("agent " + std::to_string(self_) + " missing own cost for state " +
                            std::to_string(state));
    }
    if (ups.size() != children_.size()) {
        throw ProtocolError("agent " + std::to_string(self_) + " expected " +
                            std::to_string(children_.size()) + " partials for state " +
                            std::to_string(state) + ", got " + std::to_string(ups.size()));
    }
    std::vector<double> partial = own.data;
    for (const Message* m : ups) {
        if (m->call != call_ || m->state != state || m->payload.size() != replicas_) {
            throw ProtocolError("agent " + std::to_string(self_) + " got a stale AlsUp");
        }
        for (std::uint32_t k = 0; k < replicas_; ++k) partial[k] += m->payload[k];
    }
    if (parent_) {
        Message up;
        up.kind = MessageKind::AlsUp;
        up.call = call_;
        up.state = state;
        up.payload = std::move(partial);
        ctx.send(*parent_, std::move(up));
        return std::nullopt;
    }
    return Completed{state, std::move(partial)};
}

void AlsNode::announce(const StateId& id, AgentContext& ctx) {
    best_ = id;
    best_value_ = value_at(id.state, id.replica);
    for (VariableId child : children_) {
        Message down;
        down.kind = MessageKind::AlsDown;
        down.call = id.call;
        down.replica = id.replica;
        down.state = id.state;
        ctx.send(child, std::move(down));
    }
}

void AlsNode::apply_down(const Message& down, AgentContext& ctx) {
    if (down.call != call_) {
        throw ProtocolError("agent " + std::to_string(self_) + " got AlsDown for another call");
    }
    announce(StateId{down.call, down.replica, down.state}, ctx);
}

void AlsTracker::begin_call(std::uint32_t call, std::uint64_t iteration_base) {
    call_ = call;
    iteration_base_ = iteration_base;
    call_best_.assign(replicas_, std::numeric_limits<double>::infinity());
}

std::optional<std::uint32_t> AlsTracker::observe(std::uint64_t round, std::uint32_t state,
                                                 std::span<const double> costs) {
    std::optional<std::uint32_t> improved;
    for (std::uint32_t k = 0; k < replicas_; ++k) {
        if (costs[k] < call_best_[k]) call_best_[k] = costs[k];
        if (costs[k] < best_cost_) {
            best_cost_ = costs[k];
            best_ = StateId{call_, k, state};
            improved = k;
        }
    }
    trace_.append(TraceRow{round, iteration_base_ + state, call_, state, best_cost_,
                           std::vector<double>(costs.begin(), costs.end())});
    return improved;
}

BestSnapshot best_snapshot(const Problem& problem, std::span<const AlsNode* const> nodes) {
    if (nodes.empty() || !nodes.front()->has_best()) {
        throw ProtocolError("no snapshot yet");
    }
    const StateId id = *nodes.front()->best_id();
    BestSnapshot snap;
    snap.id = id;
    snap.assignment.values.resize(nodes.size());
    for (const AlsNode* node : nodes) {
        if (!node->has_best() || !(*node->best_id() == id)) {
            throw ProtocolError("no snapshot yet");
        }
        snap.assignment[node->self()] = node->best_value();
    }
    snap.cost = evaluate_global(problem, snap.assignment);
    return snap;
}

}  // namespace mifdcop
