#include "mifdcop/model/expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "mifdcop/error.hpp"
#include "mifdcop/util/format.hpp"

namespace mifdcop {

namespace {

using Op = Expression::Op;

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expression parse_all() {
        Expression e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return e;
    }

private:
    Expression parse_sum() {
        Expression lhs = parse_product();
        for (;;) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                lhs = lhs + parse_product();
            } else if (peek() == '-') {
                ++pos_;
                lhs = lhs - parse_product();
            } else {
                return lhs;
            }
        }
    }

    Expression parse_product() {
        Expression lhs = parse_unary();
        for (;;) {
            skip_ws();
            if (peek() != '*') {
                return lhs;
            }
            ++pos_;
            lhs = lhs * parse_unary();
        }
    }

    Expression parse_unary() {
        skip_ws();
        if (peek() == '-' && !starts_number(pos_ + 1)) {
            ++pos_;
            return -parse_unary();
        }
        return parse_power();
    }

    Expression parse_power() {
        Expression base = parse_primary();
        skip_ws();
        if (peek() != '^') {
            return base;
        }
        ++pos_;
        skip_ws();
        double exponent = parse_number();
        if (exponent < 0 || exponent != std::floor(exponent) || exponent > 64) {
            fail("exponent must be an integer constant in [0, 64]");
        }
        return pow(std::move(base), static_cast<std::uint32_t>(exponent));
    }

    Expression parse_primary() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expression inner = parse_sum();
            expect(')');
            return inner;
        }
        if (c == 'x') {
            return Expression::variable(parse_variable());
        }
        if (c == 'I') {
            ++pos_;
            expect('(');
            skip_ws();
            VariableId id = parse_variable();
            skip_ws();
            if (text_.substr(pos_, 2) != "==") {
                fail("expected '==' in indicator");
            }
            pos_ += 2;
            skip_ws();
            double value = parse_number();
            expect(')');
            return Expression::indicator(id, value);
        }
        if (starts_number(pos_)) {
            return Expression::constant(parse_number());
        }
        fail("expected a term");
    }

    VariableId parse_variable() {
        if (text_.substr(pos_, 2) != "x_") {
            fail("expected variable reference x_<id>");
        }
        pos_ += 2;
        std::uint32_t id = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), id);
        if (ec != std::errc{}) {
            fail("bad variable id");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return id;
    }

    double parse_number() {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (ec != std::errc{} || !std::isfinite(value)) {
            fail("bad numeric literal");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }

    bool starts_number(std::size_t at) const {
        if (at < text_.size() && text_[at] == '-') {
            ++at;
        }
        return at < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[at])) || text_[at] == '.');
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression: " + what + " at offset " + std::to_string(pos_) + " in \"" +
                         std::string(text_) + "\"");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::constant(double value) {
    Expression e;
    e.nodes_.push_back({Op::Const, value, 0, 0});
    return e;
}

Expression Expression::variable(VariableId id) {
    Expression e;
    e.nodes_.push_back({Op::Var, 0.0, id, 0});
    return e;
}

Expression Expression::indicator(VariableId id, double value) {
    Expression e;
    e.nodes_.push_back({Op::Indicator, value, id, 0});
    return e;
}

Expression operator+(Expression a, const Expression& b) {
    a.nodes_.insert(a.nodes_.end(), b.nodes_.begin(), b.nodes_.end());
    a.nodes_.push_back({Op::Add, 0.0, 0, 0});
    return a;
}

Expression operator-(Expression a, const Expression& b) {
    a.nodes_.insert(a.nodes_.end(), b.nodes_.begin(), b.nodes_.end());
    a.nodes_.push_back({Op::Sub, 0.0, 0, 0});
    return a;
}

Expression operator*(Expression a, const Expression& b) {
    a.nodes_.insert(a.nodes_.end(), b.nodes_.begin(), b.nodes_.end());
    a.nodes_.push_back({Op::Mul, 0.0, 0, 0});
    return a;
}

Expression operator-(Expression a) {
    a.nodes_.push_back({Op::Neg, 0.0, 0, 0});
    return a;
}

Expression pow(Expression base, std::uint32_t exponent) {
    base.nodes_.push_back({Op::Pow, 0.0, 0, exponent});
    return base;
}

Expression Expression::parse(std::string_view text) { return Parser(text).parse_all(); }

std::string Expression::to_string() const {
    std::vector<std::string> stack;
    for (const Node& n : nodes_) {
        switch (n.op) {
            case Op::Const:
                stack.push_back(format_double(n.value));
                break;
            case Op::Var:
                stack.push_back("x_" + std::to_string(n.var));
                break;
            case Op::Indicator:
                stack.push_back("I(x_" + std::to_string(n.var) + " == " + format_double(n.value) +
                                ")");
                break;
            case Op::Neg:
                stack.back() = "(-(" + stack.back() + "))";
                break;
            case Op::Pow:
                stack.back() = "(" + stack.back() + " ^ " + std::to_string(n.exponent) + ")";
                break;
            case Op::Add:
            case Op::Sub:
            case Op::Mul: {
                std::string rhs = std::move(stack.back());
                stack.pop_back();
                const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : " * ";
                stack.back() = "(" + stack.back() + sym + rhs + ")";
                break;
            }
        }
    }
    return stack.empty() ? std::string("0") : stack.back();
}

std::vector<VariableId> Expression::variables() const {
    std::vector<VariableId> ids;
    for (const Node& n : nodes_) {
        if (n.op == Op::Var || n.op == Op::Indicator) {
            ids.push_back(n.var);
        }
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

CompiledExpression::CompiledExpression(const Expression& expr, std::span<const VariableId> scope) {
    std::size_t depth = 0;
    for (const auto& n : expr.nodes()) {
        Instr in{n.op, 0, n.exponent, n.value};
        if (n.op == Op::Var || n.op == Op::Indicator) {
            auto it = std::find(scope.begin(), scope.end(), n.var);
            if (it == scope.end()) {
                throw ValidationError("expression references x_" + std::to_string(n.var) +
                                      " outside the constraint scope");
            }
            in.slot = static_cast<std::uint32_t>(it - scope.begin());
        }
        switch (n.op) {
            case Op::Const:
            case Op::Var:
            case Op::Indicator:
                ++depth;
                break;
            case Op::Add:
            case Op::Sub:
            case Op::Mul:
                if (depth < 2) throw ValidationError("malformed expression");
                --depth;
                break;
            case Op::Neg:
            case Op::Pow:
                if (depth < 1) throw ValidationError("malformed expression");
                break;
        }
        max_stack_ = std::max(max_stack_, depth);
        program_.push_back(in);
    }
    if (depth != 1) {
        throw ValidationError("malformed expression");
    }
}

double CompiledExpression::evaluate(std::span<const double> scope_values) const {
    constexpr std::size_t kInline = 64;
    std::array<double, kInline> inline_stack;
    std::vector<double> heap_stack;
    double* stack = inline_stack.data();
    if (max_stack_ > kInline) {
        heap_stack.resize(max_stack_);
        stack = heap_stack.data();
    }
    std::size_t top = 0;
    for (const Instr& in : program_) {
        switch (in.op) {
            case Op::Const:
                stack[top++] = in.value;
                break;
            case Op::Var:
                stack[top++] = scope_values[in.slot];
                break;
            case Op::Indicator:
                stack[top++] = scope_values[in.slot] == in.value ? 1.0 : 0.0;
                break;
            case Op::Add:
                --top;
                stack[top - 1] += stack[top];
                break;
            case Op::Sub:
                --top;
                stack[top - 1] -= stack[top];
                break;
            case Op::Mul:
                --top;
                stack[top - 1] *= stack[top];
                break;
            case Op::Neg:
                stack[top - 1] = -stack[top - 1];
                break;
            case Op::Pow: {
                double base = stack[top - 1];
                double r = 1.0;
                for (std::uint32_t i = 0; i < in.exponent; ++i) r *= base;
                stack[top - 1] = r;
                break;
            }
        }
    }
    return stack[0];
}

}  // namespace mifdcop
