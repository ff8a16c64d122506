#include "mifdcop/baselines/baselines.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "mifdcop/error.hpp"

namespace mifdcop::baselines {

void DsanConfig::validate() const {
    if (budget < 1) throw ConfigError("DSAN budget must be at least 1");
    if (constant_temperature && !(*constant_temperature > 0.0)) {
        throw ConfigError("DSAN constant temperature must be positive");
    }
    if (proposal.kind == dpsa::ProposalKind::GaussianStep && !(proposal.sigma > 0.0)) {
        throw ConfigError("Gaussian proposal step must be positive");
    }
}

double dsan_temperature(const DsanConfig& config, std::uint32_t i) {
    if (config.constant_temperature) return *config.constant_temperature;
    return dpsa::cooling_temperature(config.schedule, i, config.budget);
}

search::SearchRun run_dsan(const Problem& problem, const DsanConfig& config, std::uint64_t seed,
                           const search::RunOptions& options) {
    config.validate();
    search::CallRequest plan;
    plan.length = config.budget;
    if (config.constant_temperature) {
        plan.temperature.kind = search::TemperatureRule::Kind::PerReplica;
        plan.temperature.per_replica = {*config.constant_temperature};
    } else {
        plan.temperature.kind = search::TemperatureRule::Kind::Cooling;
        plan.temperature.cooling = config.schedule;
        plan.temperature.budget = config.budget;
    }
    search::SearchSettings settings;
    settings.replicas = 1;
    settings.move = std::make_shared<search::AnnealMove>(config.proposal);
    return search::run_search(problem, settings, std::make_shared<SinglePlanController>(plan),
                              seed, options);
}

void DsaConfig::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("DSA activation probability must lie in [0, 1]");
    if (budget < 1) throw ConfigError("DSA budget must be at least 1");
    if (continuous_candidates < 1) throw ConfigError("DSA needs at least one continuous candidate");
}

double DsaCMove::move(const search::MoveInput& in) const {
    const LocalView& view = in.view;
    const Domain& domain = view.domain();
    const std::uint64_t per_eval = view.incident_count();

    const double current_cost = view.local_cost(in.current, in.neighbor_values);
    in.evaluations += per_eval;

    std::vector<double> candidates;
    if (domain.is_discrete()) {
        candidates.assign(domain.values().begin(), domain.values().end());
    } else {
        for (std::uint32_t i = 0; i < config_.continuous_candidates; ++i) {
            candidates.push_back(dpsa::select_next(domain, in.current, config_.proposal, in.rng));
        }
    }

    double best = current_cost;
    std::vector<double> minimizers;
    for (double v : candidates) {
        if (v == in.current) continue;
        const double c = view.local_cost(v, in.neighbor_values);
        in.evaluations += per_eval;
        if (c < best) {
            best = c;
            minimizers.assign(1, v);
        } else if (c == best) {
            minimizers.push_back(v);
        }
    }
    if (minimizers.empty()) return in.current;
    if (!(uniform01(in.rng) < config_.p)) return in.current;
    if (minimizers.size() == 1) return minimizers.front();
    std::uniform_int_distribution<std::size_t> pick(0, minimizers.size() - 1);
    return minimizers[pick(in.rng)];
}

search::SearchRun run_dsa_c(const Problem& problem, const DsaConfig& config, std::uint64_t seed,
                            const search::RunOptions& options) {
    config.validate();
    search::CallRequest plan;
    plan.length = config.budget;
    search::SearchSettings settings;
    settings.replicas = 1;
    settings.move = std::make_shared<DsaCMove>(config);
    return search::run_search(problem, settings, std::make_shared<SinglePlanController>(plan),
                              seed, options);
}

}  // namespace mifdcop::baselines
