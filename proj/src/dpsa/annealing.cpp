#include "mifdcop/dpsa/annealing.hpp"

#include <algorithm>
#include <cmath>

#include "mifdcop/error.hpp"

namespace mifdcop::dpsa {

double select_next(const Domain& domain, double current, const Proposal& proposal, Rng& rng) {
    if (domain.is_discrete()) {
        auto values = domain.values();
        std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
        return values[pick(rng)];
    }
    if (proposal.kind == ProposalKind::UniformDomain) {
        double v = std::uniform_real_distribution<double>(domain.lower(), domain.upper())(rng);
        // uniform_real_distribution is half-open; keep the result inside [LB, UB] regardless.
        return std::clamp(v, domain.lower(), domain.upper());
    }
    double v = std::normal_distribution<double>(current, proposal.sigma)(rng);
    return std::clamp(v, domain.lower(), domain.upper());
}

bool anneal_accept(double gain, double temperature, Rng& rng) {
    if (!(temperature > 0.0)) {
        throw ConfigError("annealing temperature must be positive");
    }
    if (gain >= 0.0) {
        return true;
    }
    return uniform01(rng) < std::exp(gain / temperature);
}

double scheduler(std::uint32_t l, std::uint32_t k, bool is_learning,
                 std::span<const double> temperatures, double t_min, double t_max,
                 std::uint32_t length, FinalScheduler kind) {
    if (is_learning) {
        return temperatures[k];
    }
    if (kind == FinalScheduler::Constant || length == 0) {
        return 0.5 * (t_min + t_max);
    }
    const double remaining = static_cast<double>(length) - static_cast<double>(l);
    return t_min + (t_max - t_min) * remaining / static_cast<double>(length);
}

double cooling_temperature(CoolingSchedule schedule, std::uint32_t i, std::uint32_t budget) {
    const double sq = static_cast<double>(i) * static_cast<double>(i);
    if (schedule == CoolingSchedule::MaxIterOverISq) {
        return static_cast<double>(budget) / sq;
    }
    return 1.0 / sq;
}

}  // namespace mifdcop::dpsa
