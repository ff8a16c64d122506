#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mifdcop {

// Variables and agents share one index space: agent i controls variable i.
using VariableId = std::uint32_t;

enum class DomainKind { Discrete, Continuous };

class Domain {
public:
    static Domain discrete(std::vector<double> values);
    static Domain continuous(double lower, double upper);
    // {lo, lo+1, ..., hi}
    static Domain integer_range(int lo, int hi);

    DomainKind kind() const { return kind_; }
    bool is_discrete() const { return kind_ == DomainKind::Discrete; }

    // Discrete only; values in declaration order.
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    double lower() const { return lower_; }
    double upper() const { return upper_; }

    bool contains(double value) const;
    // Position of `value` in values(), Discrete only.
    std::optional<std::size_t> position_of(double value) const;

    friend bool operator==(const Domain& a, const Domain& b) {
        return a.kind_ == b.kind_ && a.values_ == b.values_ && a.lower_ == b.lower_ &&
               a.upper_ == b.upper_;
    }

private:
    Domain() = default;

    DomainKind kind_ = DomainKind::Discrete;
    std::vector<double> values_;
    // (value, position) sorted by value, for lookup.
    std::vector<std::pair<double, std::size_t>> sorted_;
    double lower_ = 0.0;
    double upper_ = 0.0;
};

}  // namespace mifdcop
