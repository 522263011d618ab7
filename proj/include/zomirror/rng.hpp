#pragma once

#include <cmath>
#include <cstdint>

namespace zomirror {

// Deterministic, splittable random stream. A stream is fully identified by
// (seed, stream_id); the same pair yields the same draw sequence on every
// run. child(label) derives an independent stream without consuming state,
// so concurrent consumers can each own a stream and results stay
// schedule-independent.
//
// Generator: xoshiro256++ seeded through splitmix64.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {
        std::uint64_t x = seed ^ 0x9e3779b97f4a7c15ull;
        x = mix64(x + stream_id * 0xbf58476d1ce4e5b9ull);
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ull;
            word = mix64(x);
        }
        // xoshiro must not start from the all-zero state
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    RngStream child(std::uint64_t label) const {
        return RngStream(seed_, mix64(stream_ ^ mix64(label + 0x9e3779b97f4a7c15ull)));
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

    // uniform on [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1]; safe as a log() argument
    double uniform01_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // standard normal via Box-Muller; the paired draw is cached
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_pos();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Rademacher draw as +-1.0; consumes one bit from a 64-bit buffer
    double sign() {
        if (sign_bits_ == 0) {
            sign_buf_ = next_u64();
            sign_bits_ = 64;
        }
        const double s = (sign_buf_ & 1u) ? 1.0 : -1.0;
        sign_buf_ >>= 1;
        --sign_bits_;
        return s;
    }

    // unbiased integer on [0, n), n >= 1 (Lemire rejection)
    std::uint64_t below(std::uint64_t n) {
        for (;;) {
            const std::uint64_t x = next_u64();
            const std::uint64_t r = x % n;
            if (x - r <= ~n + 1) return r;
        }
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    static constexpr std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_[4];
    std::uint64_t sign_buf_ = 0;
    int sign_bits_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace zomirror
