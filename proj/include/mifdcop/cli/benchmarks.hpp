#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "mifdcop/cli/params.hpp"
#include "mifdcop/model/problem.hpp"

namespace mifdcop::cli {

enum class BenchmarkKind { RandomDcop, Wgcp, FdcopQuad, Mif };

BenchmarkKind parse_benchmark_kind(std::string_view name);  // random-dcop | wgcp | fdcop-quad | mif
std::string to_string(BenchmarkKind kind);

// Generator parameters use the generator field names: n, p, d, cost_lo, ...
// mif takes the fdcop-quad fields plus fraction, discrete_lo, discrete_hi.
Problem generate(BenchmarkKind kind, const Json& params, std::uint64_t seed);

}  // namespace mifdcop::cli
