#include "mifdcop/dpsa/cross_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mifdcop/error.hpp"

namespace mifdcop::dpsa {

void ThetaVector::validate() const {
    if (!std::isfinite(first) || !std::isfinite(second)) {
        throw ConfigError("theta must be finite");
    }
    if (kind == Distribution::Uniform) {
        if (!(first > 0.0) || first > second) {
            throw ConfigError("uniform theta requires 0 < T_min <= T_max");
        }
    } else if (!(first > 0.0) || second < 0.0) {
        throw ConfigError("gaussian theta requires mean > 0 and std >= 0");
    }
}

std::pair<double, double> ThetaVector::region() const {
    if (kind == Distribution::Uniform) {
        return {first, second};
    }
    return {std::max(kTemperatureFloor, first - second), first + second};
}

std::vector<double> sample_temperatures(const ThetaVector& theta, std::size_t k,
                                        SamplingMode mode, Rng& rng) {
    theta.validate();
    std::vector<double> out(k);
    if (theta.kind == Distribution::Gaussian) {
        std::normal_distribution<double> normal(theta.first, theta.second);
        for (double& t : out) {
            t = theta.second > 0.0 ? normal(rng) : theta.first;
            t = std::max(t, kTemperatureFloor);
        }
        return out;
    }
    const double lo = theta.first;
    const double hi = theta.second;
    if (mode == SamplingMode::Random) {
        std::uniform_real_distribution<double> uniform(lo, hi);
        for (double& t : out) t = lo == hi ? lo : uniform(rng);
        return out;
    }
    if (k == 1) {
        out[0] = 0.5 * (lo + hi);
        return out;
    }
    for (std::size_t i = 0; i < k; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1);
    }
    return out;
}

ParameterUpdate update_parameters(const ThetaVector& theta, std::span<const double> feedback,
                                  std::span<const double> temperatures, std::size_t elite_count,
                                  double alpha, double sensitivity, double best_cost) {
    const std::size_t k = feedback.size();
    if (temperatures.size() != k || k == 0) {
        throw ConfigError("feedback and temperatures must both have K entries");
    }
    if (elite_count == 0 || elite_count > k) {
        throw ConfigError("elite count must be in [1, K]");
    }
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw ConfigError("learning rate must lie in (0, 1]");
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return feedback[a] < feedback[b]; });

    ParameterUpdate result;
    result.gamma = sensitivity_band(sensitivity, best_cost);
    result.threshold = feedback[order[elite_count - 1]] + result.gamma;
    for (std::size_t i = 0; i < k; ++i) {
        if (feedback[i] <= result.threshold) {
            result.selected.push_back(i);
            result.selected_temperatures.push_back(temperatures[i]);
        }
    }
    const auto& elite = result.selected_temperatures;

    if (theta.kind == Distribution::Uniform) {
        auto [lo, hi] = std::minmax_element(elite.begin(), elite.end());
        result.fitted = ThetaVector::uniform(*lo, *hi);
    } else {
        const double n = static_cast<double>(elite.size());
        const double mean = std::accumulate(elite.begin(), elite.end(), 0.0) / n;
        double var = 0.0;
        for (double t : elite) var += (t - mean) * (t - mean);
        result.fitted = ThetaVector::gaussian(mean, std::sqrt(var / n));
    }
    result.theta = theta;
    result.theta.first = (1.0 - alpha) * theta.first + alpha * result.fitted.first;
    result.theta.second = (1.0 - alpha) * theta.second + alpha * result.fitted.second;
    return result;
}

bool feedback_converged(std::span<const double> feedback, double gamma) {
    if (feedback.empty()) return true;
    auto [lo, hi] = std::minmax_element(feedback.begin(), feedback.end());
    return *hi - *lo <= gamma;
}

}  // namespace mifdcop::dpsa
