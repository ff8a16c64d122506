#include "mifdcop/cli/params.hpp"

#include <set>

#include "mifdcop/error.hpp"

namespace mifdcop::cli {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, std::string_view what) {
    if (!j.is_object()) throw ConfigError(std::string(what) + " parameters must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) {
            throw ConfigError("unknown " + std::string(what) + " parameter '" + key + "'");
        }
    }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("parameter '") + key + "' has the wrong type");
    }
}

template <typename E>
E read_enum(const Json& j, const char* key, E current,
            std::initializer_list<std::pair<const char*, E>> names) {
    if (!j.contains(key)) return current;
    if (!j.at(key).is_string()) throw ConfigError(std::string("parameter '") + key + "' must be a string");
    const std::string s = j.at(key).get<std::string>();
    for (auto [name, value] : names) {
        if (s == name) return value;
    }
    throw ConfigError("parameter '" + std::string(key) + "' has unknown value '" + s + "'");
}

const char* name_of(dpsa::ProposalKind k) { return k == dpsa::ProposalKind::UniformDomain ? "uniform" : "gaussian"; }
const char* name_of(dpsa::Distribution d) { return d == dpsa::Distribution::Uniform ? "uniform" : "gaussian"; }
const char* name_of(dpsa::SamplingMode m) { return m == dpsa::SamplingMode::Stratified ? "stratified" : "random"; }
const char* name_of(dpsa::FinalScheduler f) { return f == dpsa::FinalScheduler::Linear ? "linear" : "constant"; }
const char* name_of(dpsa::CoolingSchedule c) {
    return c == dpsa::CoolingSchedule::MaxIterOverISq ? "max_iter_over_i_sq" : "one_over_i_sq";
}

dpsa::Proposal read_proposal(const Json& j, dpsa::Proposal p) {
    p.kind = read_enum(j, "proposal", p.kind,
                       {{"uniform", dpsa::ProposalKind::UniformDomain},
                        {"gaussian", dpsa::ProposalKind::GaussianStep}});
    read(j, "sigma", p.sigma);
    return p;
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
    if (name == "dpsa") return Algorithm::Dpsa;
    if (name == "dsan") return Algorithm::Dsan;
    if (name == "dsa-c") return Algorithm::DsaC;
    throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected dpsa, dsan or dsa-c)");
}

std::string to_string(Algorithm algo) {
    switch (algo) {
        case Algorithm::Dpsa: return "dpsa";
        case Algorithm::Dsan: return "dsan";
        case Algorithm::DsaC: return "dsa-c";
    }
    return "?";
}

bool has_continuous(const Problem& problem) {
    for (const Domain& d : problem.domains()) {
        if (!d.is_discrete()) return true;
    }
    return false;
}

dpsa::DpsaConfig dpsa_from_json(const Json& j, dpsa::DpsaConfig c) {
    check_keys(j, {"itr_max", "r_max", "s_max", "s_len", "k", "g", "alpha", "sensitivity",
                   "distribution", "theta0", "sampling", "proposal", "sigma", "final_scheduler",
                   "early_termination"},
               "dpsa");
    read(j, "itr_max", c.itr_max);
    read(j, "r_max", c.r_max);
    read(j, "s_max", c.s_max);
    read(j, "s_len", c.s_len);
    read(j, "k", c.k);
    if (j.contains("g")) {
        if (j.at("g").is_null()) {
            c.g.reset();
        } else {
            std::uint32_t g = 0;
            read(j, "g", g);
            c.g = g;
        }
    }
    read(j, "alpha", c.alpha);
    read(j, "sensitivity", c.sensitivity);
    c.theta0.kind = read_enum(j, "distribution", c.theta0.kind,
                              {{"uniform", dpsa::Distribution::Uniform},
                               {"gaussian", dpsa::Distribution::Gaussian}});
    if (j.contains("theta0")) {
        std::vector<double> t;
        read(j, "theta0", t);
        if (t.size() != 2) throw ConfigError("theta0 must have two entries");
        c.theta0.first = t[0];
        c.theta0.second = t[1];
    }
    c.sampling = read_enum(j, "sampling", c.sampling,
                           {{"stratified", dpsa::SamplingMode::Stratified},
                            {"random", dpsa::SamplingMode::Random}});
    c.proposal = read_proposal(j, c.proposal);
    c.final_scheduler = read_enum(j, "final_scheduler", c.final_scheduler,
                                  {{"linear", dpsa::FinalScheduler::Linear},
                                   {"constant", dpsa::FinalScheduler::Constant}});
    read(j, "early_termination", c.early_termination);
    return c;
}

Json to_json(const dpsa::DpsaConfig& c) {
    Json j;
    j["itr_max"] = c.itr_max;
    j["r_max"] = c.r_max;
    j["s_max"] = c.s_max;
    j["s_len"] = c.s_len;
    j["k"] = c.k;
    j["g"] = c.elite_count();
    j["alpha"] = c.alpha;
    j["sensitivity"] = c.sensitivity;
    j["distribution"] = name_of(c.theta0.kind);
    j["theta0"] = {c.theta0.first, c.theta0.second};
    j["sampling"] = name_of(c.sampling);
    j["proposal"] = name_of(c.proposal.kind);
    j["sigma"] = c.proposal.sigma;
    j["final_scheduler"] = name_of(c.final_scheduler);
    j["early_termination"] = c.early_termination;
    return j;
}

baselines::DsanConfig dsan_from_json(const Json& j, baselines::DsanConfig c) {
    check_keys(j, {"schedule", "budget", "proposal", "sigma", "constant_temperature"}, "dsan");
    c.schedule = read_enum(j, "schedule", c.schedule,
                           {{"max_iter_over_i_sq", dpsa::CoolingSchedule::MaxIterOverISq},
                            {"one_over_i_sq", dpsa::CoolingSchedule::OneOverISq}});
    read(j, "budget", c.budget);
    c.proposal = read_proposal(j, c.proposal);
    if (j.contains("constant_temperature")) {
        if (j.at("constant_temperature").is_null()) {
            c.constant_temperature.reset();
        } else {
            double t = 0.0;
            read(j, "constant_temperature", t);
            c.constant_temperature = t;
        }
    }
    return c;
}

Json to_json(const baselines::DsanConfig& c) {
    Json j;
    j["schedule"] = name_of(c.schedule);
    j["budget"] = c.budget;
    j["proposal"] = name_of(c.proposal.kind);
    j["sigma"] = c.proposal.sigma;
    j["constant_temperature"] =
        c.constant_temperature ? Json(*c.constant_temperature) : Json(nullptr);
    return j;
}

baselines::DsaConfig dsa_from_json(const Json& j, baselines::DsaConfig c) {
    check_keys(j, {"p", "budget", "proposal", "sigma", "continuous_candidates"}, "dsa-c");
    read(j, "p", c.p);
    read(j, "budget", c.budget);
    c.proposal = read_proposal(j, c.proposal);
    read(j, "continuous_candidates", c.continuous_candidates);
    return c;
}

Json to_json(const baselines::DsaConfig& c) {
    Json j;
    j["p"] = c.p;
    j["budget"] = c.budget;
    j["proposal"] = name_of(c.proposal.kind);
    j["sigma"] = c.proposal.sigma;
    j["continuous_candidates"] = c.continuous_candidates;
    return j;
}

AlgorithmSetup resolve_algorithm(Algorithm algo, const Json& overrides, const Problem& problem) {
    const Json& o = overrides.is_null() ? Json::object() : overrides;
    bool continuous = has_continuous(problem);
    Json rest = o;
    if (o.is_object() && o.contains("preset")) {
        const auto preset = o.at("preset").get<std::string>();
        if (preset == "discrete") {
            continuous = false;
        } else if (preset == "continuous") {
            continuous = true;
        } else if (preset != "auto") {
            throw ConfigError("unknown preset '" + preset + "'");
        }
        rest.erase("preset");
    }
    const dpsa::DpsaConfig dpsa_base =
        continuous ? dpsa::DpsaConfig::continuous_defaults() : dpsa::DpsaConfig::discrete_defaults();

    AlgorithmSetup setup;
    setup.algo = algo;
    switch (algo) {
        case Algorithm::Dpsa: {
            auto c = dpsa_from_json(rest, dpsa_base);
            c.validate();
            setup.params = to_json(c);
            break;
        }
        case Algorithm::Dsan: {
            baselines::DsanConfig base;
            base.budget = dpsa_base.itr_max;
            auto c = dsan_from_json(rest, base);
            c.validate();
            setup.params = to_json(c);
            break;
        }
        case Algorithm::DsaC: {
            baselines::DsaConfig base;
            base.budget = dpsa_base.itr_max;
            auto c = dsa_from_json(rest, base);
            c.validate();
            setup.params = to_json(c);
            break;
        }
    }
    return setup;
}

RunOutput run_algorithm(const Problem& problem, const AlgorithmSetup& setup, std::uint64_t seed,
                        const search::RunOptions& options) {
    RunOutput out;
    search::SearchRun run;
    switch (setup.algo) {
        case Algorithm::Dpsa: {
            auto result = dpsa::run_dpsa(problem, dpsa_from_json(setup.params, {}), seed, options);
            Json history = Json::array();
            for (const auto& h : result.theta_history) {
                Json rec;
                rec["round"] = h.round;
                rec["theta"] = {h.theta.first, h.theta.second};
                rec["temperatures"] = h.temperatures;
                rec["feedback"] = h.feedback;
                rec["selected"] = h.selected;
                rec["gamma"] = h.gamma;
                rec["updated"] = {h.updated.first, h.updated.second};
                const auto [lo, hi] = h.updated.region();
                rec["region_width"] = hi - lo;
                rec["converged"] = h.converged;
                history.push_back(std::move(rec));
            }
            out.details["learning_rounds"] = result.learning_rounds;
            out.details["early_terminated"] = result.early_terminated;
            out.details["theta_history"] = std::move(history);
            run = std::move(result.run);
            break;
        }
        case Algorithm::Dsan:
            run = baselines::run_dsan(problem, dsan_from_json(setup.params, {}), seed, options);
            break;
        case Algorithm::DsaC:
            run = baselines::run_dsa_c(problem, dsa_from_json(setup.params, {}), seed, options);
            break;
    }
    out.best = std::move(run.best);
    out.trace = std::move(run.trace);
    out.rounds = run.rounds;
    out.iterations = run.iterations;
    return out;
}

Json result_json(const RunOutput& out, double wall_seconds) {
    Json j;
    j["best_cost"] = out.best.cost;
    j["assignment"] = out.best.assignment.values;
    j["best_state"] = {{"call", out.best.id.call},
                       {"replica", out.best.id.replica},
                       {"state", out.best.id.state}};
    j["rounds"] = out.rounds;
    j["iterations"] = out.iterations;
    j["wall_seconds"] = wall_seconds;
    for (const auto& [key, value] : out.details.items()) j[key] = value;
    return j;
}

}  // namespace mifdcop::cli
