#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "mifdcop/model/constraint.hpp"
#include "mifdcop/model/domain.hpp"

namespace mifdcop {

/// A mixed discrete/continuous constraint optimization problem.
///
/// Variable i is controlled by agent i. The problem is immutable after
/// construction and may be shared freely between agents and threads.
class Problem {
public:
    Problem(std::vector<Domain> domains, std::vector<Constraint> constraints);

    std::size_t num_variables() const { return domains_.size(); }
    const Domain& domain(VariableId v) const { return domains_.at(v); }
    std::span<const Domain> domains() const { return domains_; }
    std::span<const Constraint> constraints() const { return constraints_; }

    // Indices into constraints() of every constraint whose scope contains v.
    std::span<const std::size_t> incident(VariableId v) const { return incident_.at(v); }
    // Variables sharing at least one constraint with v, ascending.
    std::span<const VariableId> neighbors(VariableId v) const { return neighbors_.at(v); }

    // Components of the constraint graph, each ascending, ordered by smallest member.
    std::vector<std::vector<VariableId>> connected_components() const;
    bool is_connected() const { return connected_components().size() <= 1; }

    friend bool operator==(const Problem& a, const Problem& b) {
        return a.domains_ == b.domains_ && a.constraints_ == b.constraints_;
    }

private:
    std::vector<Domain> domains_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<std::size_t>> incident_;
    std::vector<std::vector<VariableId>> neighbors_;
};

struct Assignment {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](VariableId v) const { return values[v]; }
    double& operator[](VariableId v) { return values[v]; }
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Throws ValidationError naming the first variable whose value is outside its domain.
void validate_assignment(const Problem& problem, const Assignment& assignment);

/// Sum of all constraint costs, each constraint counted once.
double evaluate_global(const Problem& problem, const Assignment& assignment);

/// Sum of the constraints containing `variable`, with `variable` at `own_value`
/// and its neighbors at `neighbor_values`. Every neighbor must be present.
double local_cost(const Problem& problem, VariableId variable, double own_value,
                  const std::map<VariableId, double>& neighbor_values);

/// local_cost(current) - local_cost(candidate); positive means the candidate
/// lowers the cost.
double local_gain(const Problem& problem, VariableId variable, double current_value,
                  double candidate_value, const std::map<VariableId, double>& neighbor_values);

/// One agent's view of its constraints, with neighbor values addressed by
/// slot (the neighbor's position in Problem::neighbors(self)).
class LocalView {
public:
    LocalView(const Problem& problem, VariableId self);

    VariableId self() const { return self_; }
    const Domain& domain() const { return *domain_; }
    std::span<const VariableId> neighbors() const { return neighbors_; }
    std::size_t degree() const { return neighbors_.size(); }
    // Slot of a neighbor id, or -1.
    int slot_of(VariableId neighbor) const;

    std::size_t incident_count() const { return entries_.size(); }
    std::size_t owned_count() const;

    // Sum over all incident constraints.
    double local_cost(double own_value, std::span<const double> neighbor_values) const;
    // Sum over constraints this agent owns (it is the lowest id in the scope),
    // so summing owned_cost over all agents gives the global cost.
    double owned_cost(double own_value, std::span<const double> neighbor_values) const;

private:
    struct Entry {
        const Constraint* constraint;
        std::vector<int> slots;  // per scope position: -1 for self, else neighbor slot
        bool owned;
    };
    double evaluate(const Entry& e, double own_value, std::span<const double> nb) const;

    VariableId self_;
    const Domain* domain_;
    std::vector<VariableId> neighbors_;
    std::vector<Entry> entries_;
};

}  // namespace mifdcop
