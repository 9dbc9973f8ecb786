#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sts/gf.hpp"

namespace sts {

/// Resource coordination request message: a 9-bit payload.
/// Bit layout (LSB first): bits 0-1 resource_id, bits 2-4 traffic_priority,
/// bits 5-6 target_sinr, bits 7-8 hashed_bs_id.
struct RcrMessage {
    std::uint8_t resource_id = 0;       // 2 bits
    std::uint8_t traffic_priority = 0;  // 3 bits
    std::uint8_t target_sinr = 0;       // 2 bits
    std::uint8_t hashed_bs_id = 0;      // 2 bits

    std::uint16_t to_bits() const;
    static RcrMessage from_bits(std::uint16_t bits);

    friend bool operator==(const RcrMessage&, const RcrMessage&) = default;
};

inline constexpr unsigned kRcrmPayloadBits = 9;

/// (N, K) Reed-Solomon code over GF(2^m) whose symbols are tone positions.
struct CodeParams {
    GaloisField field;
    unsigned n;  // block length: one code symbol per OFDM symbol
    unsigned k;  // message length

    /// Validates 1 <= k <= n <= S - 1.
    CodeParams(GaloisField f, unsigned n_, unsigned k_);

    unsigned t() const { return (n - k) / 2; }    // error-correction capability
    unsigned rho() const { return n - k; }        // error-detection capability

    /// S^K, saturating at 2^63 to keep comparisons safe.
    std::uint64_t codeword_count() const;
};

/// K information symbols V_1..V_K, each in [0, S).
struct InfoSymbols {
    std::vector<GfElem> v;
    friend bool operator==(const InfoSymbols&, const InfoSymbols&) = default;
};

/// N tone positions C_1..C_N; c[i] is the energized subcarrier of OFDM symbol i+1.
struct StsCodeword {
    std::vector<GfElem> c;
    friend bool operator==(const StsCodeword&, const StsCodeword&) = default;
};

/// Detector output: one set of subcarrier indices per OFDM symbol, sorted
/// ascending. Sets may be empty (missed tones) or hold extras (false alarms).
struct DetectedToneSets {
    std::vector<std::vector<std::uint32_t>> sets;
};

/// Message integer <-> base-S information symbols, V_1 the least significant
/// digit: m = V_K S^(K-1) + ... + V_2 S + V_1.
InfoSymbols info_symbols_from_index(const CodeParams& params, std::uint64_t index);
std::uint64_t index_from_info_symbols(const CodeParams& params, const InfoSymbols& v);

/// Packs the 9-bit message into base-S symbols. Throws std::length_error when
/// the payload does not fit (S^K < 2^9).
InfoSymbols pack_rcrm(const RcrMessage& msg, const CodeParams& params);

/// Inverse of pack_rcrm. Throws std::invalid_argument when the encoded
/// integer is not a valid 9-bit payload.
RcrMessage unpack_rcrm(const InfoSymbols& v, const CodeParams& params);

/// Time-varying 9-bit -> 2-bit base station id hash:
/// ((bs_id * 40503 + frame_index * 2654435761) mod 2^16) >> 14.
std::uint8_t hash_bs_id(std::uint32_t bs_id, std::uint32_t frame_index);

/// g(X) = (X - alpha)(X - alpha^2)...(X - alpha^(N-K)); the constant
/// polynomial 1 when N = K.
GfPoly generator_poly(const CodeParams& params);

/// Systematic encoding: p(X) = X^(N-K) m(X) mod g(X), c(X) = X^(N-K) m(X) + p(X).
/// C_1..C_(N-K) carry the parity, C_(N-K+1)..C_N carry V_1..V_K.
StsCodeword rs_encode(const CodeParams& params, const InfoSymbols& v);

/// Tone schedule: entry n is the subcarrier energized during OFDM symbol n.
std::vector<std::uint32_t> codeword_to_tone_grid(const StsCodeword& cw);

struct DecodeCandidate {
    InfoSymbols symbols;
    std::uint64_t index;  // message integer
    unsigned score;       // number of symbols whose tone was in the detected set
};

/// Exhaustive list decoder. Every candidate message is encoded once at
/// construction; decode scores each candidate codeword against the detected
/// tone sets. Throws std::length_error when S^K exceeds 2^20.
class ListDecoder {
public:
    explicit ListDecoder(CodeParams params);

    const CodeParams& params() const { return params_; }

    /// All candidates with score >= theta, sorted by descending score then
    /// ascending message integer. Requires 1 <= theta <= N and exactly N
    /// detected sets.
    std::vector<DecodeCandidate> decode(const DetectedToneSets& detected, unsigned theta) const;

    /// Codeword of candidate message `index` (N symbols).
    const GfElem* codeword(std::uint64_t index) const {
        return codebook_.data() + index * params_.n;
    }

private:
    CodeParams params_;
    std::vector<GfElem> codebook_;  // S^K x N, row-major
};

/// One-shot convenience wrapper around ListDecoder.
std::vector<DecodeCandidate> list_decode(const DetectedToneSets& detected,
                                         const CodeParams& params, unsigned theta);

/// Largest U satisfying K <= ceil(N/U); S^K (the codeword count) when K = 1.
std::uint64_t max_users(const CodeParams& params);

/// (t, rho) = (floor((N-K)/2), N-K).
std::pair<unsigned, unsigned> error_capability(const CodeParams& params);

}  // namespace sts
