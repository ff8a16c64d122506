#include "mifdcop/model/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mifdcop/error.hpp"
#include "mifdcop/util/format.hpp"

namespace mifdcop {

Constraint::Constraint(std::vector<VariableId> scope, Payload payload)
    : scope_(std::move(scope)), payload_(std::move(payload)) {
    if (scope_.empty()) {
        throw ValidationError("constraint scope must not be empty");
    }
    auto sorted = scope_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ValidationError("constraint scope repeats a variable");
    }
}

void Constraint::bind(std::span<const Domain> domains) {
    for (VariableId v : scope_) {
        if (v >= domains.size()) {
            throw ValidationError("constraint references unknown variable x_" + std::to_string(v));
        }
    }
    if (const auto* table = std::get_if<CostTable>(&payload_)) {
        scope_domains_.clear();
        strides_.assign(scope_.size(), 1);
        std::size_t expected = 1;
        for (VariableId v : scope_) {
            const Domain& d = domains[v];
            if (!d.is_discrete()) {
                throw ValidationError("table constraint over continuous variable x_" +
                                      std::to_string(v));
            }
            scope_domains_.push_back(d);
            expected *= d.size();
        }
        for (std::size_t i = scope_.size(); i-- > 1;) {
            strides_[i - 1] = strides_[i] * scope_domains_[i].size();
        }
        if (table->costs.size() != expected) {
            throw ValidationError("cost table has " + std::to_string(table->costs.size()) +
                                  " entries, expected " + std::to_string(expected));
        }
        for (double c : table->costs) {
            if (!std::isfinite(c)) {
                throw ValidationError("cost table entries must be finite");
            }
        }
        return;
    }
    const auto& fn = std::get<CostFunction>(payload_);
    for (const auto& node : fn.expr.nodes()) {
        if (node.op != Expression::Op::Indicator) {
            continue;
        }
        const Domain& d = domains[node.var];
        if (!d.is_discrete()) {
            throw ValidationError("indicator over continuous variable x_" +
                                  std::to_string(node.var));
        }
        if (!d.contains(node.value)) {
            throw ValidationError("indicator value " + format_double(node.value) +
                                  " not in domain of x_" + std::to_string(node.var));
        }
    }
    compiled_ = CompiledExpression(fn.expr, scope_);
}

double Constraint::evaluate(std::span<const double> scope_values) const {
    if (const auto* table = std::get_if<CostTable>(&payload_)) {
        std::size_t index = 0;
        for (std::size_t i = 0; i < scope_.size(); ++i) {
            auto pos = scope_domains_[i].position_of(scope_values[i]);
            if (!pos) {
                throw ValidationError("value " + format_double(scope_values[i]) +
                                      " not in domain of x_" + std::to_string(scope_[i]));
            }
            index += *pos * strides_[i];
        }
        return table->costs[index];
    }
    return compiled_.evaluate(scope_values);
}

}  // namespace mifdcop
