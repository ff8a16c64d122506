#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mifdcop/dpsa/annealing.hpp"
#include "mifdcop/dpsa/cross_entropy.hpp"
#include "mifdcop/dpsa/search.hpp"

namespace mifdcop::dpsa {

struct DpsaConfig {
    std::uint32_t itr_max = 2500;
    std::uint32_t r_max = 12;
    std::uint32_t s_max = 1;
    std::uint32_t s_len = 100;
    std::uint32_t k = 16;
    std::optional<std::uint32_t> g;  // unset: max(2, K / 5)
    double alpha = 0.5;
    double sensitivity = 0.01;
    ThetaVector theta0 = ThetaVector::uniform(1e-3, 1e3);
    SamplingMode sampling = SamplingMode::Stratified;
    Proposal proposal;
    FinalScheduler final_scheduler = FinalScheduler::Linear;
    bool early_termination = true;

    static DpsaConfig discrete_defaults();
    static DpsaConfig continuous_defaults();

    std::uint32_t elite_count() const;
    std::uint32_t final_length() const;
    // Throws ConfigError on any violated invariant.
    void validate() const;
};

/// One learning round as seen by the root.
struct ThetaRecord {
    std::uint32_t round = 0;  // 1-based
    ThetaVector theta;        // distribution the temperatures were drawn from
    std::vector<double> temperatures;
    std::vector<double> feedback;
    std::vector<std::size_t> selected;
    double gamma = 0.0;
    ThetaVector updated;
    bool converged = false;
};

struct DpsaResult {
    search::SearchRun run;
    std::vector<ThetaRecord> theta_history;
    std::uint32_t learning_rounds = 0;
    bool early_terminated = false;

    const BestSnapshot& best() const { return run.best; }
    const AnytimeTrace& trace() const { return run.trace; }
};

class DpsaController : public search::Controller {
public:
    DpsaController(DpsaConfig config, std::uint64_t seed);

    search::CallRequest first_plan() override;
    void on_call_complete(const search::CallFeedback& feedback) override;
    std::optional<search::CallRequest> next_plan(const search::CallFeedback& feedback) override;

    const std::vector<ThetaRecord>& history() const { return history_; }
    bool early_terminated() const { return early_terminated_; }

private:
    search::CallRequest learning_plan();

    DpsaConfig config_;
    Rng rng_;
    ThetaVector theta_;
    std::vector<double> temperatures_;
    std::vector<double> feedback_;
    std::vector<ThetaRecord> history_;
    bool final_started_ = false;
    bool early_terminated_ = false;
};

DpsaResult run_dpsa(const Problem& problem, const DpsaConfig& config, std::uint64_t seed,
                    const search::RunOptions& options = {});

}  // namespace mifdcop::dpsa
