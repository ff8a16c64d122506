#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mifdcop/model/domain.hpp"

namespace mifdcop {

/// Arithmetic cost expression over problem variables.
///
/// Nodes are stored in postfix order, so the node list doubles as a stack
/// program. Supported terms: constants, variable references `x_k`, `+`, `-`,
/// `*`, unary minus, `^` with a non-negative integer constant exponent, and
/// indicator terms `I(x_k == v)` that evaluate to 1 when `x_k` equals `v`.
/// Restricting exponents to integers keeps every expression total over any
/// real-valued domain.
class Expression {
public:
    enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Neg, Pow, Indicator };

    struct Node {
        Op op;
        double value = 0.0;      // Const: literal, Indicator: compared value
        std::uint32_t var = 0;   // Var/Indicator: variable id
        std::uint32_t exponent = 0;

        friend bool operator==(const Node&, const Node&) = default;
    };

    static Expression constant(double value);
    static Expression variable(VariableId id);
    static Expression indicator(VariableId id, double value);

    /// Parses the textual form, e.g. `(2 * (x_0 ^ 2)) + I(x_1 == 3)`.
    static Expression parse(std::string_view text);

    /// Canonical fully-parenthesized text; `parse(e.to_string()) == e`.
    std::string to_string() const;

    /// Distinct variable ids referenced, ascending.
    std::vector<VariableId> variables() const;

    std::span<const Node> nodes() const { return nodes_; }

    friend Expression operator+(Expression a, const Expression& b);
    friend Expression operator-(Expression a, const Expression& b);
    friend Expression operator*(Expression a, const Expression& b);
    friend Expression operator-(Expression a);
    friend Expression pow(Expression base, std::uint32_t exponent);

    friend bool operator==(const Expression&, const Expression&) = default;

private:
    std::vector<Node> nodes_;
};

/// Expression lowered onto a constraint scope: variable references become
/// scope positions so evaluation takes the scope's values directly.
class CompiledExpression {
public:
    CompiledExpression() = default;
    CompiledExpression(const Expression& expr, std::span<const VariableId> scope);

    double evaluate(std::span<const double> scope_values) const;

private:
    struct Instr {
        Expression::Op op;
        std::uint32_t slot;
        std::uint32_t exponent;
        double value;
    };
    std::vector<Instr> program_;
    std::size_t max_stack_ = 0;
};

}  // namespace mifdcop
