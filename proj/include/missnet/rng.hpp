#ifndef MISSNET_RNG_HPP
#define MISSNET_RNG_HPP

#include <cmath>
#include <cstdint>

namespace missnet {

// splitmix64 step; also used as the mixing hash for derived stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_hash(std::uint64_t x) {
    std::uint64_t s = x;
    return splitmix64(s);
}

// Replicate/stream r of a base seed: base ^ hash(r), so streams are
// independent and reproducible in any execution order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return base ^ mix_hash(stream + 0x51ed2701ULL);
}

// xoshiro256++ with fully specified output, so draw sequences are
// bit-identical across platforms (stdlib distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound); bound > 0. Rejection keeps it unbiased.
    std::uint64_t uniform_int(std::uint64_t bound) {
        std::uint64_t threshold = (-bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Box-Muller; pairs are consumed one at a time.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace missnet

#endif
