#pragma once

#include <cmath>
#include <cstdint>

namespace scn {

// splitmix64 step: advances the state and returns the next output word.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic combiner for deriving sub-stream seeds (epoch/patch indices
// and similar). Part of the reproducibility contract, do not change.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a;
    (void)splitmix64_next(s);
    s ^= b + 0x9E3779B97F4A7C15ULL + (s << 6) + (s >> 2);
    return splitmix64_next(s);
}

// xoshiro256++ seeded from splitmix64. The exact generator, seeding procedure
// and double conversion are pinned: the byte streams they induce (noise
// images, weight init) are part of the on-disk reproducibility contract.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0,1), 53 significant bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). n must be positive and small against 2^53.
    int next_below(int n) {
        int v = static_cast<int>(next_double() * n);
        return v < n ? v : n - 1;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

// Standard-normal stream via Box-Muller. Consumes two uniforms per pair of
// normals; the pairing and trig convention are pinned.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_double();
        const double u2 = rng_.next_double();
        // 1-u1 lies in (0,1], keeping the log finite.
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    Xoshiro256pp rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace scn
