#pragma once

// Deterministic random streams. Each stream is an independent SplitMix64
// sequence; link streams are keyed by (scenario seed, link id) so adding or
// removing one link never perturbs another link's draws. The generator is
// part of the reproducibility contract: logs replay bit-identically for a
// given seed within a release.

#include <cstdint>
#include <string_view>

namespace satdtn {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

private:
    std::uint64_t state_;
};

// Stream for a named sub-entity of a seeded scenario (a link, a traffic
// generator, ...).
inline SplitMix64 stream_for(std::uint64_t scenario_seed, std::string_view stream_id) {
    return SplitMix64(scenario_seed ^ fnv1a64(stream_id));
}

// One Bernoulli draw: true (lost) with probability p.
// Throws std::invalid_argument if p is outside [0, 1].
bool sample_loss(SplitMix64& stream, double p);

} // namespace satdtn
