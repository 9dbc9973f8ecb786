#include "sts/codec.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sts {

namespace {

constexpr std::uint64_t kEnumerationBound = std::uint64_t{1} << 20;

}  // namespace

std::uint16_t RcrMessage::to_bits() const {
    return static_cast<std::uint16_t>((resource_id & 0x3u) | ((traffic_priority & 0x7u) << 2) |
                                      ((target_sinr & 0x3u) << 5) | ((hashed_bs_id & 0x3u) << 7));
}

RcrMessage RcrMessage::from_bits(std::uint16_t bits) {
    RcrMessage msg;
    msg.resource_id = bits & 0x3u;
    msg.traffic_priority = (bits >> 2) & 0x7u;
    msg.target_sinr = (bits >> 5) & 0x3u;
    msg.hashed_bs_id = (bits >> 7) & 0x3u;
    return msg;
}

CodeParams::CodeParams(GaloisField f, unsigned n_, unsigned k_) : field(std::move(f)), n(n_), k(k_) {
    if (k < 1 || k > n || n > field.order() - 1) {
        throw std::invalid_argument("CodeParams: need 1 <= K <= N <= S - 1, got (" +
                                    std::to_string(n) + ", " + std::to_string(k) + ") over GF(" +
                                    std::to_string(field.order()) + ")");
    }
}

std::uint64_t CodeParams::codeword_count() const {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (count > (std::uint64_t{1} << 63) / field.order()) return std::uint64_t{1} << 63;
        count *= field.order();
    }
    return count;
}

InfoSymbols info_symbols_from_index(const CodeParams& params, std::uint64_t index) {
    InfoSymbols out;
    out.v.resize(params.k);
    for (unsigned i = 0; i < params.k; ++i) {
        out.v[i] = static_cast<GfElem>(index % params.field.order());
        index /= params.field.order();
    }
    if (index != 0) throw std::out_of_range("info_symbols_from_index: index >= S^K");
    return out;
}

std::uint64_t index_from_info_symbols(const CodeParams& params, const InfoSymbols& v) {
    if (v.v.size() != params.k) {
        throw std::invalid_argument("index_from_info_symbols: expected K = " +
                                    std::to_string(params.k) + " symbols");
    }
    std::uint64_t index = 0;
    for (std::size_t i = v.v.size(); i-- > 0;) {
        if (v.v[i] >= params.field.order()) {
            throw std::out_of_range("index_from_info_symbols: symbol out of field range");
        }
        index = index * params.field.order() + v.v[i];
    }
    return index;
}

InfoSymbols pack_rcrm(const RcrMessage& msg, const CodeParams& params) {
    if (params.codeword_count() < (std::uint64_t{1} << kRcrmPayloadBits)) {
        throw std::length_error("pack_rcrm: 9-bit payload does not fit, S^K < 512");
    }
    return info_symbols_from_index(params, msg.to_bits());
}

RcrMessage unpack_rcrm(const InfoSymbols& v, const CodeParams& params) {
    const std::uint64_t index = index_from_info_symbols(params, v);
    if (index >= (std::uint64_t{1} << kRcrmPayloadBits)) {
        throw std::invalid_argument("unpack_rcrm: encoded integer " + std::to_string(index) +
                                    " is not a 9-bit payload");
    }
    return RcrMessage::from_bits(static_cast<std::uint16_t>(index));
}

std::uint8_t hash_bs_id(std::uint32_t bs_id, std::uint32_t frame_index) {
    const std::uint64_t mixed =
        (static_cast<std::uint64_t>(bs_id) * 40503u +
         static_cast<std::uint64_t>(frame_index) * 2654435761u) & 0xFFFFu;
    return static_cast<std::uint8_t>(mixed >> 14);
}

GfPoly generator_poly(const CodeParams& params) {
    GfPoly g = GfPoly::one();
    for (unsigned j = 1; j <= params.n - params.k; ++j) {
        // (X - alpha^j) = (X + alpha^j) in characteristic 2
        g = poly_mul(params.field, g, GfPoly({params.field.alpha_pow(j), 1}));
    }
    return g;
}

StsCodeword rs_encode(const CodeParams& params, const InfoSymbols& v) {
    if (v.v.size() != params.k) {
        throw std::invalid_argument("rs_encode: expected K = " + std::to_string(params.k) +
                                    " information symbols");
    }
    for (GfElem sym : v.v) {
        if (sym >= params.field.order()) {
            throw std::out_of_range("rs_encode: information symbol out of field range");
        }
    }

    const unsigned parity_len = params.n - params.k;

    // X^(N-K) m(X)
    std::vector<GfElem> shifted(params.n, 0);
    std::copy(v.v.begin(), v.v.end(), shifted.begin() + parity_len);

    const GfPoly parity = poly_mod(params.field, GfPoly(std::move(shifted)), generator_poly(params));

    StsCodeword cw;
    cw.c.assign(params.n, 0);
    for (unsigned i = 0; i < parity_len; ++i) cw.c[i] = parity.coeff(i);
    std::copy(v.v.begin(), v.v.end(), cw.c.begin() + parity_len);
    return cw;
}

std::vector<std::uint32_t> codeword_to_tone_grid(const StsCodeword& cw) {
    return {cw.c.begin(), cw.c.end()};
}

ListDecoder::ListDecoder(CodeParams params) : params_(std::move(params)) {
    const std::uint64_t count = params_.codeword_count();
    if (count > kEnumerationBound) {
        throw std::length_error("ListDecoder: S^K = " + std::to_string(count) +
                                " exceeds the exhaustive enumeration bound 2^20");
    }
    codebook_.resize(count * params_.n);
    for (std::uint64_t msg = 0; msg < count; ++msg) {
        const StsCodeword cw = rs_encode(params_, info_symbols_from_index(params_, msg));
        std::copy(cw.c.begin(), cw.c.end(), codebook_.begin() + msg * params_.n);
    }
}

std::vector<DecodeCandidate> ListDecoder::decode(const DetectedToneSets& detected,
                                                 unsigned theta) const {
    if (theta < 1 || theta > params_.n) {
        throw std::invalid_argument("ListDecoder::decode: theta must be in [1, N]");
    }
    if (detected.sets.size() != params_.n) {
        throw std::invalid_argument("ListDecoder::decode: expected N = " +
                                    std::to_string(params_.n) + " detected tone sets");
    }

    // Per-symbol membership bitmaps for O(1) lookup during scoring.
    const unsigned words_per_symbol = (params_.field.order() + 63) / 64;
    std::vector<std::uint64_t> membership(params_.n * words_per_symbol, 0);
    for (unsigned n = 0; n < params_.n; ++n) {
        for (std::uint32_t tone : detected.sets[n]) {
            if (tone >= params_.field.order()) {
                throw std::out_of_range("ListDecoder::decode: detected tone out of field range");
            }
            membership[n * words_per_symbol + tone / 64] |= std::uint64_t{1} << (tone % 64);
        }
    }

    std::vector<DecodeCandidate> out;
    const std::uint64_t count = params_.codeword_count();
    for (std::uint64_t msg = 0; msg < count; ++msg) {
        const GfElem* cw = codeword(msg);
        unsigned score = 0;
        for (unsigned n = 0; n < params_.n; ++n) {
            const GfElem tone = cw[n];
            score += (membership[n * words_per_symbol + tone / 64] >> (tone % 64)) & 1u;
        }
        if (score >= theta) {
            out.push_back({info_symbols_from_index(params_, msg), msg, score});
        }
    }
    std::sort(out.begin(), out.end(), [](const DecodeCandidate& a, const DecodeCandidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.index < b.index;
    });
    return out;
}

std::vector<DecodeCandidate> list_decode(const DetectedToneSets& detected, const CodeParams& params,
                                         unsigned theta) {
    return ListDecoder(params).decode(detected, theta);
}

std::uint64_t max_users(const CodeParams& params) {
    if (params.k == 1) return params.codeword_count();
    // Largest U with ceil(N/U) >= K, i.e. U <= ceil(N/(K-1)) - 1; never more
    // users than distinct codewords.
    const std::uint64_t by_rate = (params.n + params.k - 2) / (params.k - 1) - 1;
    return std::min<std::uint64_t>(by_rate, params.codeword_count());
}

std::pair<unsigned, unsigned> error_capability(const CodeParams& params) {
    return {params.t(), params.rho()};
}

}  // namespace sts
