#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace perfmm {

// Stream tags for the deterministic substream scheme. Every random stream in a
// simulation is keyed by (master_seed, path_index, tag); the ids below are part
// of the reproducibility contract and must stay stable across releases.
namespace stream_tag {
inline constexpr std::uint64_t price = 1;            // path price noise
inline constexpr std::uint64_t fills_driver = 2;     // the price-driving agent's fill draws
inline constexpr std::uint64_t fills_symmetric = 3;
inline constexpr std::uint64_t fills_performative = 4;
inline constexpr std::uint64_t fills_theta = 5;
inline constexpr std::uint64_t fills_shadow_driver = 6;  // optional shadow copy of the driver strategy
}  // namespace stream_tag

/// splitmix64 finalizer; used to hash (seed, path, tag) triples into engine seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t path_index,
                                    std::uint64_t tag) {
    return mix64(mix64(mix64(master_seed) ^ path_index) ^ tag);
}

/// Deterministic random stream. Uniforms and normals are produced by explicit
/// formulas (bit shift and Box-Muller) rather than std::*_distribution so the
/// draw sequence is identical across standard library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    RandomStream(std::uint64_t master_seed, std::uint64_t path_index, std::uint64_t tag)
        : engine_(substream_seed(master_seed, path_index, tag)) {}

    /// Uniform draw in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal draw (Box-Muller, cached pair).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace perfmm
