#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mifdcop/runtime/rng.hpp"

namespace mifdcop::dpsa {

enum class Distribution { Uniform, Gaussian };
enum class SamplingMode { Stratified, Random };

// Lower bound applied to Gaussian temperature draws.
inline constexpr double kTemperatureFloor = 1e-6;

/// Parameters of the temperature sampling distribution:
/// Uniform holds [T_min, T_max], Gaussian holds [mean, std].
struct ThetaVector {
    Distribution kind = Distribution::Uniform;
    double first = 1e-3;
    double second = 1e3;

    static ThetaVector uniform(double t_min, double t_max) {
        return {Distribution::Uniform, t_min, t_max};
    }
    static ThetaVector gaussian(double mean, double stddev) {
        return {Distribution::Gaussian, mean, stddev};
    }

    // Throws ConfigError unless 0 < T_min <= T_max (Uniform) or mean > 0, std >= 0.
    void validate() const;

    // Temperature region the final call anneals over. Gaussian uses
    // [max(floor, mean - std), mean + std].
    std::pair<double, double> region() const;

    friend bool operator==(const ThetaVector&, const ThetaVector&) = default;
};

/// K temperatures from the current distribution. Uniform + Stratified spaces
/// them evenly from T_min to T_max (inclusive); K = 1 yields the midpoint.
std::vector<double> sample_temperatures(const ThetaVector& theta, std::size_t k,
                                        SamplingMode mode, Rng& rng);

/// Width of the band within which two feedback values count as equally good.
inline double sensitivity_band(double sensitivity, double best_cost) {
    return sensitivity * (best_cost < 0 ? -best_cost : best_cost);
}

struct ParameterUpdate {
    ThetaVector theta;                  // after smoothing
    ThetaVector fitted;                 // fitted to the elite samples before smoothing
    std::vector<std::size_t> selected;  // indices into T
    std::vector<double> selected_temperatures;
    double threshold = 0.0;
    double gamma = 0.0;
};

/// Cross-entropy refit of the temperature distribution.
///
/// The G-th smallest feedback (stable by index on ties) plus the sensitivity
/// band gives the threshold; every temperature whose feedback is within it is
/// an elite sample. Uniform refits to [min, max] of the elites, Gaussian to
/// their mean and population standard deviation. The result is blended as
/// (1 - alpha) * theta + alpha * fitted.
ParameterUpdate update_parameters(const ThetaVector& theta, std::span<const double> feedback,
                                  std::span<const double> temperatures, std::size_t elite_count,
                                  double alpha, double sensitivity, double best_cost);

/// True when all feedback values fall within gamma of each other.
bool feedback_converged(std::span<const double> feedback, double gamma);

}  // namespace mifdcop::dpsa
