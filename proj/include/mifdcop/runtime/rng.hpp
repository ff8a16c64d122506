#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "mifdcop/model/domain.hpp"

namespace mifdcop {

using Rng = std::mt19937_64;

// Purposes a stream is drawn for. Keeping them disjoint means changing one
// consumer (e.g. the replica count) never shifts another consumer's draws.
enum class StreamTag : std::uint64_t {
    Replica = 1,    // proposals and acceptance draws of one (agent, replica)
    Init = 2,       // shared per-call random start of one agent
    Root = 3,       // temperature sampling at the BFS root
    Generator = 4,  // benchmark generation
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t run_seed, StreamTag tag,
                                 std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = splitmix64(run_seed ^ splitmix64(static_cast<std::uint64_t>(tag)));
    for (std::uint64_t p : parts) {
        h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    }
    return h;
}

inline Rng replica_stream(std::uint64_t run_seed, VariableId agent, std::uint32_t replica) {
    return Rng(derive_seed(run_seed, StreamTag::Replica, {agent, replica}));
}

inline Rng init_stream(std::uint64_t run_seed, VariableId agent, std::uint32_t call) {
    return Rng(derive_seed(run_seed, StreamTag::Init, {agent, call}));
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace mifdcop
