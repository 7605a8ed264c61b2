// Deterministic random number generation. The standard library engines are
// portable but the distributions are implementation-defined, so uniform and
// Poisson sampling are spelled out here; runs must produce byte-identical
// logs for a given seed regardless of toolchain.
#pragma once

#include <cstdint>
#include <random>

#include "lspsim/common.hpp"

namespace lsp {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi], inclusive, bias-free by rejection.
    int uniform_int(int lo, int hi) {
        if (hi < lo) throw InvalidParameterError("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return lo + static_cast<int>(v % span);
    }

    // Knuth's product method; exact for the moderate means used here.
    int poisson(double mean) {
        if (mean < 0.0) throw InvalidParameterError("poisson: mean must be >= 0");
        if (mean == 0.0) return 0;
        const double limit = std::exp(-mean);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer; decorrelates seeds derived from (master, stream, index).
inline std::uint64_t mix_bits(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    std::uint64_t h = mix_bits(master);
    h = mix_bits(h ^ (0xA5A5A5A5A5A5A5A5ULL + stream));
    h = mix_bits(h ^ (0x0F0F0F0F0F0F0F0FULL + index));
    return h;
}

}  // namespace lsp
