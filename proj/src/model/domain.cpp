#include "mifdcop/model/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mifdcop/error.hpp"

namespace mifdcop {

Domain Domain::discrete(std::vector<double> values) {
    if (values.empty()) {
        throw ValidationError("discrete domain must not be empty");
    }
    Domain d;
    d.kind_ = DomainKind::Discrete;
    d.sorted_.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw ValidationError("discrete domain values must be finite");
        }
        d.sorted_.emplace_back(values[i], i);
    }
    std::sort(d.sorted_.begin(), d.sorted_.end());
    for (std::size_t i = 1; i < d.sorted_.size(); ++i) {
        if (d.sorted_[i].first == d.sorted_[i - 1].first) {
            throw ValidationError("discrete domain has duplicate value " +
                                  std::to_string(d.sorted_[i].first));
        }
    }
    d.values_ = std::move(values);
    d.lower_ = d.sorted_.front().first;
    d.upper_ = d.sorted_.back().first;
    return d;
}

Domain Domain::continuous(double lower, double upper) {
    if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
        throw ValidationError("continuous domain requires finite bounds with LB < UB");
    }
    Domain d;
    d.kind_ = DomainKind::Continuous;
    d.lower_ = lower;
    d.upper_ = upper;
    return d;
}

Domain Domain::integer_range(int lo, int hi) {
    if (lo > hi) {
        throw ValidationError("integer range is empty");
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int v = lo; v <= hi; ++v) {
        values.push_back(static_cast<double>(v));
    }
    return discrete(std::move(values));
}

bool Domain::contains(double value) const {
    if (kind_ == DomainKind::Continuous) {
        return value >= lower_ && value <= upper_;
    }
    return position_of(value).has_value();
}

std::optional<std::size_t> Domain::position_of(double value) const {
    if (kind_ != DomainKind::Discrete) {
        return std::nullopt;
    }
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), value,
                               [](const auto& entry, double v) { return entry.first < v; });
    if (it == sorted_.end() || it->first != value) {
        return std::nullopt;
    }
    return it->second;
}

}  // namespace mifdcop
