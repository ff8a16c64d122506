#pragma once

#include <cstdint>
#include <span>

#include "mifdcop/model/domain.hpp"
#include "mifdcop/runtime/rng.hpp"

namespace mifdcop::dpsa {

// How a continuous variable proposes its next value. Discrete variables
// always draw uniformly from their value list.
enum class ProposalKind { UniformDomain, GaussianStep };

struct Proposal {
    ProposalKind kind = ProposalKind::UniformDomain;
    double sigma = 6.0;  // GaussianStep only
};

/// Candidate value for one replica. GaussianStep samples N(current, sigma)
/// and clamps to [LB, UB].
double select_next(const Domain& domain, double current, const Proposal& proposal, Rng& rng);

/// Accepts with probability min(1, exp(gain / t)). A uniform draw is consumed
/// only when gain < 0. Throws ConfigError when t <= 0.
bool anneal_accept(double gain, double temperature, Rng& rng);

enum class FinalScheduler { Constant, Linear };

/// Temperature of replica k (0-based) at iteration l of a call of length L.
/// Learning calls run each replica at its own constant temperature T[k]. The
/// final call either decays linearly from t_max to t_min,
///   t = t_min + (t_max - t_min) (L - l) / L,
/// or holds the region midpoint.
double scheduler(std::uint32_t l, std::uint32_t k, bool is_learning,
                 std::span<const double> temperatures, double t_min, double t_max,
                 std::uint32_t length, FinalScheduler kind);

// Fixed cooling schedules of plain distributed annealing, at iteration i >= 1.
enum class CoolingSchedule { MaxIterOverISq, OneOverISq };

double cooling_temperature(CoolingSchedule schedule, std::uint32_t i, std::uint32_t budget);

}  // namespace mifdcop::dpsa
