#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace simopn {

// Counter-based generator built on the SplitMix64 output function.
// Every stream is keyed by (master seed, stream id, substream id), so a
// trial's random inputs depend only on those three integers and never on
// how trials are scheduled across worker threads. Distribution transforms
// (Box-Muller, rejection) are implemented here rather than taken from
// <random> because libstdc++ does not promise bit-identical sequences
// across versions and reproducibility of simulation output is a contract.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(mix(seed ^ kInit)) {}

    // Independent stream for one (stream, substream) pair, e.g. one sweep
    // point and one trial index.
    static RandomStream keyed(std::uint64_t master_seed,
                              std::uint64_t stream,
                              std::uint64_t substream) {
        std::uint64_t s = mix(master_seed ^ kInit);
        s = mix(s ^ mix(stream ^ kStreamSalt));
        s = mix(s ^ mix(substream ^ kSubstreamSalt));
        RandomStream r(0);
        r.state_ = s;
        r.have_spare_normal_ = false;
        return r;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1]; safe as a log() argument.
    double next_unit_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform angle in [-pi, pi).
    double next_angle() {
        return (next_unit() - 0.5) * 2.0 * std::numbers::pi;
    }

    // Uniform integer in [0, n), by rejection so the result is unbiased.
    std::uint32_t next_below(std::uint32_t n) {
        if (n <= 1) return 0;
        const std::uint64_t span = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return static_cast<std::uint32_t>(v % span);
    }

    // Standard normal via Box-Muller; the second value of each pair is
    // cached so consumption order stays deterministic.
    double next_normal() {
        if (have_spare_normal_) {
            have_spare_normal_ = false;
            return spare_normal_;
        }
        const double r = std::sqrt(-2.0 * std::log(next_unit_open()));
        const double t = 2.0 * std::numbers::pi * next_unit();
        spare_normal_ = r * std::sin(t);
        have_spare_normal_ = true;
        return r * std::cos(t);
    }

    // Circularly symmetric complex normal with unit total variance,
    // i.e. variance 1/2 per real component.
    std::complex<double> next_cnormal() {
        const double re = next_normal();
        const double im = next_normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

private:
    static constexpr std::uint64_t kInit = 0x8e2f0f0a61b9c2d4ULL;
    static constexpr std::uint64_t kStreamSalt = 0x243f6a8885a308d3ULL;
    static constexpr std::uint64_t kSubstreamSalt = 0x13198a2e03707344ULL;

    // SplitMix64 finalizer (Stafford mix13 constants).
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
    double spare_normal_ = 0.0;
    bool have_spare_normal_ = false;
};

// Wrap an angle into [-pi, pi). Idempotent: wrapping a wrapped value
// returns it unchanged, which detector shift identities rely on.
inline double wrap_angle(double a) {
    if (a >= -std::numbers::pi && a < std::numbers::pi) return a;
    const double two_pi = 2.0 * std::numbers::pi;
    double w = std::remainder(a, two_pi);
    if (w >= std::numbers::pi) w -= two_pi;
    if (w < -std::numbers::pi) w += two_pi;
    return w;
}

}  // namespace simopn
