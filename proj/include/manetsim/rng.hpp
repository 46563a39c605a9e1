#pragma once

#include <cstdint>
#include <cmath>
#include <string>
#include <string_view>

namespace manet {

/// Deterministic seeded random stream (xoshiro256** seeded via splitmix64).
///
/// Streams are derived from a root seed plus a textual label, so every
/// stochastic subsystem (mobility, traffic, link, per-node protocol jitter)
/// draws from its own reproducible sequence regardless of event interleaving.
/// Integer output is identical across platforms; floating-point helpers use
/// only multiplication/ldexp on top of it.
class RngStream {
public:
    RngStream() : RngStream(1, "root") {}

    RngStream(std::uint64_t seed, std::string label)
        : seed_(seed), label_(std::move(label)) {
        std::uint64_t sm = seed_ ^ fnv1a64(label_);
        for (auto& word : state_) word = splitmix64(sm);
    }

    /// Child stream deterministic in (this stream's seed, label).
    RngStream fork(std::string_view label) const {
        return RngStream(splitmix_once(seed_ ^ fnv1a64(label_)),
                         label_ + "/" + std::string(label));
    }

    std::uint64_t seed() const { return seed_; }
    const std::string& label() const { return label_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return std::ldexp(static_cast<double>(next_u64() >> 11), -53); }

    /// Uniform double in [a, b). Degenerate a == b returns a.
    double uniform(double a, double b) { return a + uniform01() * (b - a); }

    /// Integer in [0, n), n > 0. Unbiased via rejection.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t v;
        do { v = next_u64(); } while (v >= limit);
        return v % n;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via Box-Muller (explicit, so sequences are portable).
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Lognormal draw with log-space mean mu and stddev sigma.
    double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

    static std::uint64_t fnv1a64(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x00000100000001b3ull;
        }
        return h;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    static std::uint64_t splitmix_once(std::uint64_t x) { return splitmix64(x); }

    std::uint64_t seed_;
    std::string label_;
    std::uint64_t state_[4]{};
};

}  // namespace manet
