#include "mifdcop/cli/benchmarks.hpp"

#include <set>

#include "mifdcop/bench/generators.hpp"
#include "mifdcop/error.hpp"

namespace mifdcop::cli {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
    if (j.is_null()) return;
    if (!j.is_object()) throw ConfigError(what + " parameters must be an object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError("unknown " + what + " parameter '" + item.key() + "'");
        }
    }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
    if (j.is_null() || !j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("parameter '") + key + "' has the wrong type");
    }
}

bench::QuadraticParams quad_params(const Json& j) {
    bench::QuadraticParams q;
    read(j, "n", q.n);
    read(j, "p", q.p);
    read(j, "coeff_lo", q.coeff_lo);
    read(j, "coeff_hi", q.coeff_hi);
    read(j, "domain_lo", q.domain_lo);
    read(j, "domain_hi", q.domain_hi);
    return q;
}

}  // namespace

BenchmarkKind parse_benchmark_kind(std::string_view name) {
    if (name == "random-dcop") return BenchmarkKind::RandomDcop;
    if (name == "wgcp") return BenchmarkKind::Wgcp;
    if (name == "fdcop-quad") return BenchmarkKind::FdcopQuad;
    if (name == "mif") return BenchmarkKind::Mif;
    throw ConfigError("unknown benchmark '" + std::string(name) +
                      "' (expected random-dcop, wgcp, fdcop-quad or mif)");
}

std::string to_string(BenchmarkKind kind) {
    switch (kind) {
        case BenchmarkKind::RandomDcop: return "random-dcop";
        case BenchmarkKind::Wgcp: return "wgcp";
        case BenchmarkKind::FdcopQuad: return "fdcop-quad";
        case BenchmarkKind::Mif: return "mif";
    }
    return "?";
}

Problem generate(BenchmarkKind kind, const Json& params, std::uint64_t seed) {
    switch (kind) {
        case BenchmarkKind::RandomDcop: {
            check_keys(params, {"n", "p", "d", "cost_lo", "cost_hi"}, "random-dcop");
            bench::RandomDcopParams r;
            read(params, "n", r.n);
            read(params, "p", r.p);
            read(params, "d", r.d);
            read(params, "cost_lo", r.cost_lo);
            read(params, "cost_hi", r.cost_hi);
            return bench::gen_random_dcop(r, seed);
        }
        case BenchmarkKind::Wgcp: {
            check_keys(params, {"n", "p", "colors", "weight_lo", "weight_hi"}, "wgcp");
            bench::WgcpParams w;
            read(params, "n", w.n);
            read(params, "p", w.p);
            read(params, "colors", w.colors);
            read(params, "weight_lo", w.weight_lo);
            read(params, "weight_hi", w.weight_hi);
            return bench::gen_wgcp(w, seed);
        }
        case BenchmarkKind::FdcopQuad:
            check_keys(params, {"n", "p", "coeff_lo", "coeff_hi", "domain_lo", "domain_hi"},
                       "fdcop-quad");
            return bench::gen_binary_quadratic_fdcop(quad_params(params), seed);
        case BenchmarkKind::Mif: {
            check_keys(params,
                       {"n", "p", "coeff_lo", "coeff_hi", "domain_lo", "domain_hi", "fraction",
                        "discrete_lo", "discrete_hi"},
                       "mif");
            double fraction = 0.5;
            int lo = -20, hi = 20;
            read(params, "fraction", fraction);
            read(params, "discrete_lo", lo);
            read(params, "discrete_hi", hi);
            Problem base = bench::gen_binary_quadratic_fdcop(quad_params(params), seed);
            return bench::discretize_to_mif(base, fraction, seed, lo, hi);
        }
    }
    throw ConfigError("unknown benchmark kind");
}

}  // namespace mifdcop::cli
