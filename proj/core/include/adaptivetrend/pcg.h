#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace adaptivetrend {

/// PCG64 (XSL-RR 128/64) with selectable stream, matching O'Neill's
/// pcg_setseq_128_xsl_rr_64 reference generator bit for bit.
class Pcg64 {
public:
    using result_type = std::uint64_t;
    __extension__ using uint128 = unsigned __int128;

    explicit Pcg64(std::uint64_t seed, std::uint64_t stream = 0) {
        inc_ = (static_cast<uint128>(stream) << 1u) | 1u;
        state_ = 0;
        step();
        state_ += seed;
        step();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        step();
        const auto hi = static_cast<std::uint64_t>(state_ >> 64u);
        const auto lo = static_cast<std::uint64_t>(state_);
        const auto xored = hi ^ lo;
        const auto rot = static_cast<unsigned>(hi >> 58u);
        return (xored >> rot) | (xored << ((64u - rot) & 63u));
    }

    /// Uniform on [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>((*this)() >> 11u) * 0x1.0p-53; }

    /// Uniform integer on [0, n) by rejection (no modulo bias).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (true) {
            const auto r = (*this)();
            if (r >= threshold) return r % n;
        }
    }

    /// Standard normal via the cosine branch of Box-Muller (two uniforms per draw).
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    void step() { state_ = state_ * kMultiplier + inc_; }

    static constexpr uint128 kMultiplier =
        (static_cast<uint128>(0x2360ED051FC65DA4ULL) << 64u) | 0x4385DF649FCCF645ULL;

    uint128 state_ = 0;
    uint128 inc_ = 0;
};

}  // namespace adaptivetrend
