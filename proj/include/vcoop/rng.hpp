#pragma once

// Reproducible random streams. Every trial owns an engine seeded from
// (seed, stream_id, trial_index), so results do not depend on how trials are
// spread over threads.

#include <cstdint>
#include <random>

namespace vcoop::mc {

struct RngSpec {
    std::uint64_t seed = 1;
    std::uint64_t stream_id = 0;
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t trial_key(const RngSpec& spec, std::uint64_t trial_index) {
    return mix64(mix64(mix64(spec.seed) ^ spec.stream_id) ^ trial_index);
}

class TrialRng {
public:
    TrialRng(const RngSpec& spec, std::uint64_t trial_index)
        : engine_(trial_key(spec, trial_index)) {}

    /// Standard normal draw.
    double normal() { return normal_(engine_); }

    double uniform() { return std::generate_canonical<double, 53>(engine_); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace vcoop::mc
