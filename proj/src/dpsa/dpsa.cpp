#include "mifdcop/dpsa/dpsa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mifdcop/error.hpp"

namespace mifdcop::dpsa {

DpsaConfig DpsaConfig::discrete_defaults() { return DpsaConfig{}; }

DpsaConfig DpsaConfig::continuous_defaults() {
    DpsaConfig c;
    c.itr_max = 3000;
    c.s_len = 120;
    c.sensitivity = 0.005;
    c.k = 25;
    c.theta0 = ThetaVector::uniform(1e-4, 1e4);
    return c;
}

std::uint32_t DpsaConfig::elite_count() const { return g ? *g : std::max<std::uint32_t>(2, k / 5); }

std::uint32_t DpsaConfig::final_length() const {
    const std::uint64_t learning = static_cast<std::uint64_t>(r_max) * s_max * s_len;
    return learning < itr_max ? static_cast<std::uint32_t>(itr_max - learning) : 0;
}

void DpsaConfig::validate() const {
    if (k < 2) throw ConfigError("K must be at least 2");
    if (r_max < 1 || s_max < 1 || s_len < 1) {
        throw ConfigError("R_max, S_max and S_len must be at least 1");
    }
    if (static_cast<std::uint64_t>(r_max) * s_max * s_len >= itr_max) {
        throw ConfigError("R_max * S_max * S_len = " +
                          std::to_string(static_cast<std::uint64_t>(r_max) * s_max * s_len) +
                          " leaves no final iterations within Itr_max = " + std::to_string(itr_max));
    }
    const std::uint32_t elite = elite_count();
    if (elite < 1 || elite > k) throw ConfigError("G must lie in [1, K]");
    if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("alpha must lie in (0, 1]");
    if (!(sensitivity >= 0.0) || !std::isfinite(sensitivity)) {
        throw ConfigError("sensitivity must be finite and >= 0");
    }
    if (proposal.kind == ProposalKind::GaussianStep && !(proposal.sigma > 0.0)) {
        throw ConfigError("Gaussian proposal step must be positive");
    }
    theta0.validate();
}

DpsaController::DpsaController(DpsaConfig config, std::uint64_t seed)
    : config_(std::move(config)),
      rng_(derive_seed(seed, StreamTag::Root, {})),
      theta_(config_.theta0) {
    config_.validate();
}

search::CallRequest DpsaController::learning_plan() {
    temperatures_ = sample_temperatures(theta_, config_.k, config_.sampling, rng_);
    feedback_.assign(config_.k, 0.0);
    search::CallRequest request;
    request.length = config_.s_len;
    request.repeats = config_.s_max;
    request.learning = true;
    request.temperature.kind = search::TemperatureRule::Kind::PerReplica;
    request.temperature.per_replica = temperatures_;
    return request;
}

search::CallRequest DpsaController::first_plan() { return learning_plan(); }

void DpsaController::on_call_complete(const search::CallFeedback& feedback) {
    if (final_started_) return;
    for (std::size_t k = 0; k < feedback_.size(); ++k) {
        feedback_[k] += feedback.call_best[k] / static_cast<double>(config_.s_max);
    }
}

std::optional<search::CallRequest> DpsaController::next_plan(const search::CallFeedback& feedback) {
    if (final_started_) return std::nullopt;

    ThetaRecord rec;
    rec.round = static_cast<std::uint32_t>(history_.size() + 1);
    rec.theta = theta_;
    rec.temperatures = temperatures_;
    rec.feedback = feedback_;
    ParameterUpdate up = update_parameters(theta_, feedback_, temperatures_, config_.elite_count(),
                                           config_.alpha, config_.sensitivity, feedback.best_cost);
    rec.selected = up.selected;
    rec.gamma = up.gamma;
    rec.updated = up.theta;
    rec.converged = config_.early_termination && feedback_converged(feedback_, up.gamma);
    theta_ = up.theta;
    history_.push_back(rec);

    if (!rec.converged && history_.size() < config_.r_max) {
        return learning_plan();
    }
    early_terminated_ = rec.converged && history_.size() < config_.r_max;
    final_started_ = true;
    auto [t_min, t_max] = theta_.region();
    search::CallRequest request;
    request.length = config_.final_length();
    request.init_from_best = true;
    request.temperature.kind = search::TemperatureRule::Kind::Final;
    request.temperature.t_min = t_min;
    request.temperature.t_max = t_max;
    request.temperature.final_kind = config_.final_scheduler;
    return request;
}

DpsaResult run_dpsa(const Problem& problem, const DpsaConfig& config, std::uint64_t seed,
                    const search::RunOptions& options) {
    config.validate();
    auto controller = std::make_shared<DpsaController>(config, seed);
    search::SearchSettings settings;
    settings.replicas = config.k;
    settings.move = std::make_shared<search::AnnealMove>(config.proposal);

    DpsaResult result;
    result.run = search::run_search(problem, settings, controller, seed, options);
    result.theta_history = controller->history();
    result.learning_rounds = static_cast<std::uint32_t>(result.theta_history.size());
    result.early_terminated = controller->early_terminated();
    return result;
}

}  // namespace mifdcop::dpsa
