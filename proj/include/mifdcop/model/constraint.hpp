#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "mifdcop/model/domain.hpp"
#include "mifdcop/model/expression.hpp"

namespace mifdcop {

// Dense row-major cost table indexed by domain positions of the scope
// variables; the last scope variable varies fastest.
struct CostTable {
    std::vector<double> costs;
    friend bool operator==(const CostTable&, const CostTable&) = default;
};

struct CostFunction {
    Expression expr;
    friend bool operator==(const CostFunction&, const CostFunction&) = default;
};

class Constraint {
public:
    using Payload = std::variant<CostTable, CostFunction>;

    Constraint(std::vector<VariableId> scope, Payload payload);

    static Constraint table(std::vector<VariableId> scope, std::vector<double> costs) {
        return Constraint(std::move(scope), CostTable{std::move(costs)});
    }
    static Constraint function(std::vector<VariableId> scope, Expression expr) {
        return Constraint(std::move(scope), CostFunction{std::move(expr)});
    }

    std::span<const VariableId> scope() const { return scope_; }
    std::size_t arity() const { return scope_.size(); }
    const Payload& payload() const { return payload_; }
    bool is_table() const { return std::holds_alternative<CostTable>(payload_); }

    // Checks the payload against the problem's domains and prepares lookup
    // state. Problem calls this once on construction.
    void bind(std::span<const Domain> domains);

    // Cost at the given scope values (ordered as scope()). Requires bind().
    double evaluate(std::span<const double> scope_values) const;

    friend bool operator==(const Constraint& a, const Constraint& b) {
        return a.scope_ == b.scope_ && a.payload_ == b.payload_;
    }

private:
    std::vector<VariableId> scope_;
    Payload payload_;

    std::vector<Domain> scope_domains_;  // table lookup
    std::vector<std::size_t> strides_;
    CompiledExpression compiled_;
};

}  // namespace mifdcop
