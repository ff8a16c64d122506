#pragma once

#include <cstdint>
#include <optional>

#include "mifdcop/dpsa/annealing.hpp"
#include "mifdcop/dpsa/search.hpp"

namespace mifdcop::baselines {

/// Hands the engine one fixed plan, then stops.
class SinglePlanController : public search::Controller {
public:
    explicit SinglePlanController(search::CallRequest plan) : plan_(std::move(plan)) {}
    search::CallRequest first_plan() override { return plan_; }
    std::optional<search::CallRequest> next_plan(const search::CallFeedback&) override {
        return std::nullopt;
    }

private:
    search::CallRequest plan_;
};

struct DsanConfig {
    dpsa::CoolingSchedule schedule = dpsa::CoolingSchedule::MaxIterOverISq;
    std::uint32_t budget = 2500;
    dpsa::Proposal proposal;
    std::optional<double> constant_temperature;  // replaces the schedule when set

    void validate() const;
};

/// Temperature DSAN uses at iteration i (1-based).
double dsan_temperature(const DsanConfig& config, std::uint32_t i);

search::SearchRun run_dsan(const Problem& problem, const DsanConfig& config, std::uint64_t seed,
                           const search::RunOptions& options = {});

struct DsaConfig {
    double p = 0.8;
    std::uint32_t budget = 2500;
    dpsa::Proposal proposal;                // continuous candidate draws
    std::uint32_t continuous_candidates = 20;

    void validate() const;
};

/// DSA-C step: compute the best local response; when it improves, or ties the
/// current cost with a different value, move there with probability p.
/// Several minimizers are broken uniformly at random.
class DsaCMove : public search::MoveRule {
public:
    explicit DsaCMove(DsaConfig config) : config_(config) {}
    double move(const search::MoveInput& in) const override;

private:
    DsaConfig config_;
};

search::SearchRun run_dsa_c(const Problem& problem, const DsaConfig& config, std::uint64_t seed,
                            const search::RunOptions& options = {});

}  // namespace mifdcop::baselines
