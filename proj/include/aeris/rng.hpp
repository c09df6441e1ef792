#ifndef AERIS_RNG_HPP
#define AERIS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace aeris {

// Deterministic random stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard, so a seed pins the stream bit-exactly
// across runs and platforms. All variate transformations live in
// distributions.hpp / the samplers that use the handle; the handle itself
// only hands out raw 64-bit words, unit uniforms, and standard normals.
//
// Ownership rule: one thread drives a handle at a time. Parallel code makes
// per-stream handles with derive().
class RngHandle {
public:
    explicit RngHandle(std::uint64_t seed)
        : seed_(seed), engine_(mix(seed)) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_pos() { return 1.0 - uniform(); }

    // Standard normal via the Marsaglia polar method; the spare deviate is
    // cached, so draws come in deterministic pairs.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // Independent substream: mixes the stream index into the seed through
    // splitmix64 so that index 0,1,2,... give decorrelated engines. The
    // mapping is pure, so any worker can rebuild stream k on its own.
    RngHandle derive(std::uint64_t stream_index) const {
        return RngHandle(mix(seed_ ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1))));
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace aeris

#endif
