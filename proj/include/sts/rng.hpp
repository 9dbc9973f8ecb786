#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace sts {

/// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3", SC'11). Streams are cheap to derive and
/// statistically independent, which keeps Monte Carlo runs reproducible no
/// matter how trials are scheduled across threads.
class Philox4x32 {
public:
    Philox4x32() : Philox4x32(0, 0) {}

    /// seed selects the key, stream selects a disjoint counter subspace.
    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

    static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& ctr,
                                              const std::array<std::uint32_t, 2>& key) {
        std::array<std::uint32_t, 4> x = ctr;
        std::uint32_t k0 = key[0];
        std::uint32_t k1 = key[1];
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return x;
    }

    std::uint32_t next_u32() {
        if (buf_pos_ == 4) {
            buf_ = block(ctr_, key_);
            buf_pos_ = 0;
            if (++ctr_[0] == 0) ++ctr_[1];  // 2^64 blocks per stream
        }
        return buf_[buf_pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; safe as a log() argument.
    double next_unit_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Unbiased uniform integer in [0, n).
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Circularly-symmetric complex Gaussian CN(0, variance).
    std::complex<double> next_cnormal(double variance) {
        const double r = std::sqrt(-variance * std::log(next_unit_open()));
        const double phi = 2.0 * kPi * next_double();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    /// Real standard normal via Box-Muller (second value cached).
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(next_unit_open()));
        const double phi = 2.0 * kPi * next_double();
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    static constexpr double kPi = 3.141592653589793238462643383279502884;

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> buf_{};
    int buf_pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Stream ids for per-(point, trial, lane) derived generators. Points index
/// the (sir, n_rx) sweep, lanes separate independent draw purposes within a
/// trial (interference, channel gains, message content, ...).
inline std::uint64_t derive_stream(std::uint32_t point, std::uint32_t trial, std::uint32_t lane) {
    return (static_cast<std::uint64_t>(lane) << 56) |
           (static_cast<std::uint64_t>(point & 0xFFFFFFu) << 32) |
           trial;
}

}  // namespace sts
