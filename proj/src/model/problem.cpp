#include "mifdcop/model/problem.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "mifdcop/error.hpp"
#include "mifdcop/util/format.hpp"

namespace mifdcop {

Problem::Problem(std::vector<Domain> domains, std::vector<Constraint> constraints)
    : domains_(std::move(domains)), constraints_(std::move(constraints)) {
    incident_.resize(domains_.size());
    neighbors_.resize(domains_.size());
    for (std::size_t c = 0; c < constraints_.size(); ++c) {
        constraints_[c].bind(domains_);
        for (VariableId v : constraints_[c].scope()) {
            incident_[v].push_back(c);
            for (VariableId u : constraints_[c].scope()) {
                if (u != v) neighbors_[v].push_back(u);
            }
        }
    }
    for (auto& nb : neighbors_) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
}

std::vector<std::vector<VariableId>> Problem::connected_components() const {
    std::vector<int> component(domains_.size(), -1);
    std::vector<std::vector<VariableId>> result;
    for (VariableId start = 0; start < domains_.size(); ++start) {
        if (component[start] >= 0) continue;
        int id = static_cast<int>(result.size());
        result.emplace_back();
        std::vector<VariableId> stack{start};
        component[start] = id;
        while (!stack.empty()) {
            VariableId v = stack.back();
            stack.pop_back();
            result.back().push_back(v);
            for (VariableId u : neighbors_[v]) {
                if (component[u] < 0) {
                    component[u] = id;
                    stack.push_back(u);
                }
            }
        }
        std::sort(result.back().begin(), result.back().end());
    }
    return result;
}

void validate_assignment(const Problem& problem, const Assignment& assignment) {
    if (assignment.size() != problem.num_variables()) {
        throw ValidationError("assignment has " + std::to_string(assignment.size()) +
                              " values for " + std::to_string(problem.num_variables()) +
                              " variables");
    }
    for (VariableId v = 0; v < assignment.size(); ++v) {
        if (!problem.domain(v).contains(assignment[v])) {
            throw ValidationError("value " + format_double(assignment[v]) +
                                  " outside the domain of x_" + std::to_string(v));
        }
    }
}

double evaluate_global(const Problem& problem, const Assignment& assignment) {
    validate_assignment(problem, assignment);
    double total = 0.0;
    std::vector<double> buf;
    for (const Constraint& c : problem.constraints()) {
        buf.clear();
        for (VariableId v : c.scope()) buf.push_back(assignment[v]);
        total += c.evaluate(buf);
    }
    return total;
}

double local_cost(const Problem& problem, VariableId variable, double own_value,
                  const std::map<VariableId, double>& neighbor_values) {
    for (VariableId nb : problem.neighbors(variable)) {
        if (!neighbor_values.contains(nb)) {
            throw ValidationError("missing value for neighbor x_" + std::to_string(nb) +
                                  " of x_" + std::to_string(variable));
        }
    }
    double total = 0.0;
    std::vector<double> buf;
    for (std::size_t ci : problem.incident(variable)) {
        const Constraint& c = problem.constraints()[ci];
        buf.clear();
        for (VariableId v : c.scope()) {
            buf.push_back(v == variable ? own_value : neighbor_values.at(v));
        }
        total += c.evaluate(buf);
    }
    return total;
}

double local_gain(const Problem& problem, VariableId variable, double current_value,
                  double candidate_value, const std::map<VariableId, double>& neighbor_values) {
    return local_cost(problem, variable, current_value, neighbor_values) -
           local_cost(problem, variable, candidate_value, neighbor_values);
}

LocalView::LocalView(const Problem& problem, VariableId self)
    : self_(self), domain_(&problem.domain(self)) {
    auto nb = problem.neighbors(self);
    neighbors_.assign(nb.begin(), nb.end());
    for (std::size_t ci : problem.incident(self)) {
        const Constraint& c = problem.constraints()[ci];
        Entry e{&c, {}, true};
        for (VariableId v : c.scope()) {
            e.slots.push_back(v == self ? -1 : slot_of(v));
            if (v < self) e.owned = false;
        }
        entries_.push_back(std::move(e));
    }
}

int LocalView::slot_of(VariableId neighbor) const {
    auto it = std::lower_bound(neighbors_.begin(), neighbors_.end(), neighbor);
    if (it == neighbors_.end() || *it != neighbor) return -1;
    return static_cast<int>(it - neighbors_.begin());
}

std::size_t LocalView::owned_count() const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [](const Entry& e) { return e.owned; }));
}

double LocalView::evaluate(const Entry& e, double own_value, std::span<const double> nb) const {
    std::array<double, 16> inline_buf;
    std::vector<double> heap_buf;
    double* buf = inline_buf.data();
    if (e.slots.size() > inline_buf.size()) {
        heap_buf.resize(e.slots.size());
        buf = heap_buf.data();
    }
    for (std::size_t i = 0; i < e.slots.size(); ++i) {
        buf[i] = e.slots[i] < 0 ? own_value : nb[static_cast<std::size_t>(e.slots[i])];
    }
    return e.constraint->evaluate(std::span<const double>(buf, e.slots.size()));
}

double LocalView::local_cost(double own_value, std::span<const double> neighbor_values) const {
    double total = 0.0;
    for (const Entry& e : entries_) total += evaluate(e, own_value, neighbor_values);
    return total;
}

double LocalView::owned_cost(double own_value, std::span<const double> neighbor_values) const {
    double total = 0.0;
    for (const Entry& e : entries_) {
        if (e.owned) total += evaluate(e, own_value, neighbor_values);
    }
    return total;
}

}  // namespace mifdcop
