#include "sts/codec.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

#include "sts/rng.hpp"

namespace {

using sts::CodeParams;
using sts::DetectedToneSets;
using sts::GaloisField;
using sts::GfElem;
using sts::GfPoly;
using sts::InfoSymbols;
using sts::ListDecoder;
using sts::RcrMessage;
using sts::StsCodeword;

CodeParams paper_code() { return CodeParams(GaloisField(9), 14, 1); }

// Independent bit-layout oracle for the 9-bit payload.
std::uint16_t rcrm_bits_oracle(const RcrMessage& msg) {
    return static_cast<std::uint16_t>(msg.resource_id + 4 * msg.traffic_priority +
                                      32 * msg.target_sinr + 128 * msg.hashed_bs_id);
}

TEST(CodeParams, ValidatesDimensions) {
    EXPECT_NO_THROW(CodeParams(GaloisField(3), 7, 3));
    EXPECT_THROW(CodeParams(GaloisField(3), 8, 1), std::invalid_argument);   // N > S - 1
    EXPECT_THROW(CodeParams(GaloisField(3), 7, 0), std::invalid_argument);   // K < 1
    EXPECT_THROW(CodeParams(GaloisField(3), 5, 6), std::invalid_argument);   // K > N
}

TEST(PackRcrm, ZeroMessageMapsToZeroSymbols) {
    const auto params = paper_code();
    const RcrMessage msg;
    EXPECT_EQ(pack_rcrm(msg, params).v, std::vector<GfElem>{0});
}

TEST(PackRcrm, BitLayoutMatchesOracle) {
    const auto params = paper_code();
    RcrMessage msg;
    msg.resource_id = 3;
    const InfoSymbols v = pack_rcrm(msg, params);
    EXPECT_EQ(v.v, std::vector<GfElem>{3});
    EXPECT_EQ(v.v[0], rcrm_bits_oracle(msg));

    RcrMessage full;
    full.resource_id = 3;
    full.traffic_priority = 7;
    full.target_sinr = 3;
    full.hashed_bs_id = 3;
    EXPECT_EQ(pack_rcrm(full, params).v, std::vector<GfElem>{511});
    EXPECT_EQ(rcrm_bits_oracle(full), 511);
}

TEST(PackRcrm, RoundTripsOverAllMessages) {
    const auto params = paper_code();
    for (unsigned bits = 0; bits < 512; ++bits) {
        const RcrMessage msg = RcrMessage::from_bits(static_cast<std::uint16_t>(bits));
        EXPECT_EQ(rcrm_bits_oracle(msg), bits);
        const InfoSymbols v = pack_rcrm(msg, params);
        EXPECT_EQ(v.v[0], bits);  // K = 1: V_1 = m
        EXPECT_EQ(unpack_rcrm(v, params), msg);
    }
}

TEST(UnpackRcrm, ValueOutOfPayloadRangeThrows) {
    const CodeParams params(GaloisField(9), 14, 2);
    InfoSymbols v;
    v.v = {0, 2};  // integer 2 * 512 = 1024 >= 512
    EXPECT_THROW(unpack_rcrm(v, params), std::invalid_argument);

    v.v = {511, 0};  // 511 < 512 still decodes
    EXPECT_EQ(unpack_rcrm(v, params).to_bits(), 511);
}

TEST(PackRcrm, PayloadMustFitTheCode) {
    const CodeParams small(GaloisField(3), 7, 1);  // S^K = 8 < 512
    EXPECT_THROW(pack_rcrm(RcrMessage{}, small), std::length_error);
}

TEST(HashBsId, DeterministicNearUniformAndTimeVarying) {
    for (std::uint32_t id : {0u, 17u, 511u}) {
        EXPECT_EQ(sts::hash_bs_id(id, 3), sts::hash_bs_id(id, 3));
    }

    // Histogram over all 512 ids at a fixed frame: every 2-bit value frequent.
    std::array<unsigned, 4> histogram{};
    for (std::uint32_t id = 0; id < 512; ++id) ++histogram[sts::hash_bs_id(id, 5)];
    for (unsigned bucket : histogram) EXPECT_GE(bucket, 64u);

    // Sweeping the frame index changes the hash for nearly every id.
    unsigned varying = 0;
    for (std::uint32_t id = 0; id < 512; ++id) {
        const std::uint8_t first = sts::hash_bs_id(id, 0);
        for (std::uint32_t frame = 1; frame < 16; ++frame) {
            if (sts::hash_bs_id(id, frame) != first) {
                ++varying;
                break;
            }
        }
    }
    EXPECT_GE(varying, 512u * 9 / 10);
}

TEST(GeneratorPoly, SmallFieldExample) {
    // N - K = 2 over GF(8): (X + alpha)(X + alpha^2) = X^2 + 6X + 3.
    const CodeParams params(GaloisField(3), 7, 5);
    const GfPoly g = generator_poly(params);
    EXPECT_EQ(g, GfPoly({3, 6, 1}));
    EXPECT_EQ(poly_eval(params.field, g, params.field.alpha_pow(1)), 0u);
    EXPECT_EQ(poly_eval(params.field, g, params.field.alpha_pow(2)), 0u);
}

TEST(GeneratorPoly, PaperCodeHasDegree13MonicWithAllRoots) {
    const auto params = paper_code();
    const GfPoly g = generator_poly(params);
    EXPECT_EQ(g.degree(), 13);
    EXPECT_EQ(g.coeffs.back(), 1u);
    for (unsigned j = 1; j <= 13; ++j) {
        EXPECT_EQ(poly_eval(params.field, g, params.field.alpha_pow(j)), 0u) << "j=" << j;
    }
    EXPECT_NE(poly_eval(params.field, g, 1), 0u);
}

TEST(GeneratorPoly, DegenerateAndSingleFactorCases) {
    const CodeParams degenerate(GaloisField(4), 14, 14);
    EXPECT_EQ(generator_poly(degenerate), GfPoly::one());

    const CodeParams single(GaloisField(3), 7, 6);
    EXPECT_EQ(generator_poly(single), GfPoly({2, 1}));  // X + alpha
}

TEST(RsEncode, ZeroMessageGivesZeroCodeword) {
    const auto params = paper_code();
    InfoSymbols v;
    v.v = {0};
    const StsCodeword cw = rs_encode(params, v);
    EXPECT_EQ(cw.c, std::vector<GfElem>(14, 0));
}

TEST(RsEncode, AllPaperCodewordsSatisfyRootCheck) {
    const auto params = paper_code();
    for (std::uint64_t m = 0; m < 512; ++m) {
        const StsCodeword cw = rs_encode(params, info_symbols_from_index(params, m));
        ASSERT_EQ(cw.c.size(), 14u);
        ASSERT_EQ(cw.c.back(), m);  // systematic: C_N carries V_K
        const GfPoly cpoly(std::vector<GfElem>(cw.c.begin(), cw.c.end()));
        for (unsigned j = 1; j <= 13; ++j) {
            ASSERT_EQ(poly_eval(params.field, cpoly, params.field.alpha_pow(j)), 0u)
                << "m=" << m << " j=" << j;
        }
    }
}

TEST(RsEncode, ExhaustiveRootCheckForSmallCode) {
    const CodeParams params(GaloisField(3), 7, 3);
    for (std::uint64_t m = 0; m < 512; ++m) {
        const StsCodeword cw = rs_encode(params, info_symbols_from_index(params, m));
        const GfPoly cpoly(std::vector<GfElem>(cw.c.begin(), cw.c.end()));
        for (unsigned j = 1; j <= 4; ++j) {
            ASSERT_EQ(poly_eval(params.field, cpoly, params.field.alpha_pow(j)), 0u)
                << "m=" << m << " j=" << j;
        }
    }
}

TEST(RsEncode, DistinctMessagesDifferInAllPositionsForK1) {
    // MDS distance N - K + 1 = 14: two distinct (14,1) codewords never share
    // a tone position.
    const auto params = paper_code();
    sts::Philox4x32 rng(11, 0);
    for (int i = 0; i < 300; ++i) {
        const std::uint64_t m1 = rng.uniform_below(512);
        std::uint64_t m2 = rng.uniform_below(512);
        if (m1 == m2) m2 = (m2 + 1) % 512;
        const StsCodeword c1 = rs_encode(params, info_symbols_from_index(params, m1));
        const StsCodeword c2 = rs_encode(params, info_symbols_from_index(params, m2));
        unsigned distance = 0;
        for (unsigned n = 0; n < 14; ++n) distance += c1.c[n] != c2.c[n];
        ASSERT_EQ(distance, 14u);
    }
}

TEST(RsEncode, LinearOverTheField) {
    const auto params = paper_code();
    sts::Philox4x32 rng(12, 0);
    for (int i = 0; i < 200; ++i) {
        InfoSymbols v1{{static_cast<GfElem>(rng.uniform_below(512))}};
        InfoSymbols v2{{static_cast<GfElem>(rng.uniform_below(512))}};
        InfoSymbols vx{{v1.v[0] ^ v2.v[0]}};
        const StsCodeword c1 = rs_encode(params, v1);
        const StsCodeword c2 = rs_encode(params, v2);
        const StsCodeword cx = rs_encode(params, vx);
        for (unsigned n = 0; n < 14; ++n) {
            ASSERT_EQ(cx.c[n], c1.c[n] ^ c2.c[n]);
        }
    }

    const CodeParams p73(GaloisField(3), 7, 3);
    sts::Philox4x32 rng2(13, 0);
    for (int i = 0; i < 200; ++i) {
        const auto v1 = info_symbols_from_index(p73, rng2.uniform_below(512));
        const auto v2 = info_symbols_from_index(p73, rng2.uniform_below(512));
        InfoSymbols vx;
        for (unsigned j = 0; j < 3; ++j) vx.v.push_back(v1.v[j] ^ v2.v[j]);
        const StsCodeword c1 = rs_encode(p73, v1);
        const StsCodeword c2 = rs_encode(p73, v2);
        const StsCodeword cx = rs_encode(p73, vx);
        for (unsigned n = 0; n < 7; ++n) {
            ASSERT_EQ(cx.c[n], c1.c[n] ^ c2.c[n]);
        }
    }
}

TEST(ToneGrid, OneEntryPerSymbol) {
    const auto params = paper_code();
    const StsCodeword cw = rs_encode(params, info_symbols_from_index(params, 123));
    const auto schedule = codeword_to_tone_grid(cw);
    ASSERT_EQ(schedule.size(), 14u);
    for (unsigned n = 0; n < 14; ++n) EXPECT_EQ(schedule[n], cw.c[n]);

    StsCodeword zero;
    zero.c.assign(14, 0);
    const auto zero_schedule = codeword_to_tone_grid(zero);
    EXPECT_EQ(zero_schedule, std::vector<std::uint32_t>(14, 0));
}

DetectedToneSets perfect_sets(const ListDecoder& decoder, const std::vector<std::uint64_t>& truth) {
    DetectedToneSets detected;
    detected.sets.assign(decoder.params().n, {});
    for (unsigned n = 0; n < decoder.params().n; ++n) {
        for (std::uint64_t m : truth) detected.sets[n].push_back(decoder.codeword(m)[n]);
        auto& set = detected.sets[n];
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    return detected;
}

TEST(ListDecode, SingleUserPerfectDetection) {
    const ListDecoder decoder(paper_code());
    const auto candidates = decoder.decode(perfect_sets(decoder, {77}), 14);
    ASSERT_EQ(candidates.size(), 1u);
    EXPECT_EQ(candidates[0].index, 77u);
    EXPECT_EQ(candidates[0].score, 14u);
}

TEST(ListDecode, EmptyDetectionIsErasure) {
    const ListDecoder decoder(paper_code());
    DetectedToneSets empty;
    empty.sets.assign(14, {});
    EXPECT_TRUE(decoder.decode(empty, 1).empty());
}

TEST(ListDecode, ValidatesThetaAndSetCount) {
    const ListDecoder decoder(paper_code());
    DetectedToneSets empty;
    empty.sets.assign(14, {});
    EXPECT_THROW(decoder.decode(empty, 0), std::invalid_argument);
    EXPECT_THROW(decoder.decode(empty, 15), std::invalid_argument);
    empty.sets.assign(13, {});
    EXPECT_THROW(decoder.decode(empty, 1), std::invalid_argument);
}

TEST(ListDecode, EnumerationBoundEnforced) {
    // S^K = 512^3 = 2^27 > 2^20.
    EXPECT_THROW(ListDecoder(CodeParams(GaloisField(9), 14, 3)), std::length_error);
}

TEST(ListDecode, ResultsSortedByScoreThenIndex) {
    const ListDecoder decoder(paper_code());
    // Tones of two codewords plus noise: plenty of ties at low scores.
    DetectedToneSets detected = perfect_sets(decoder, {5, 200});
    sts::Philox4x32 rng(3, 0);
    for (auto& set : detected.sets) {
        for (int i = 0; i < 5; ++i) set.push_back(static_cast<std::uint32_t>(rng.uniform_below(512)));
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    const auto candidates = decoder.decode(detected, 1);
    ASSERT_FALSE(candidates.empty());
    EXPECT_EQ(candidates[0].index, 5u);
    EXPECT_EQ(candidates[1].index, 200u);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const bool ordered = candidates[i - 1].score > candidates[i].score ||
                             (candidates[i - 1].score == candidates[i].score &&
                              candidates[i - 1].index < candidates[i].index);
        ASSERT_TRUE(ordered) << "at " << i;
    }
}

TEST(ListDecode, PropositionHoldsForFourteenTwoCode) {
    // (14,2) over GF(16): up to 13 simultaneous users decode without loss
    // under perfect detection with theta = ceil(N/U) = 2.
    const CodeParams params(GaloisField(4), 14, 2);
    const ListDecoder decoder(params);
    sts::Philox4x32 rng(2025, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint64_t> pool(256);
        for (unsigned i = 0; i < 256; ++i) pool[i] = i;
        for (unsigned i = 0; i < 13; ++i) {
            std::swap(pool[i], pool[i + rng.uniform_below(256 - i)]);
        }
        const std::vector<std::uint64_t> truth(pool.begin(), pool.begin() + 13);

        const auto candidates = decoder.decode(perfect_sets(decoder, truth), 2);
        std::set<std::uint64_t> decoded;
        for (const auto& c : candidates) decoded.insert(c.index);
        for (std::uint64_t m : truth) {
            ASSERT_TRUE(decoded.count(m)) << "trial " << trial << " lost message " << m;
        }
    }
}

TEST(ListDecode, K1CodeSeparatesAnyUserCount) {
    const ListDecoder decoder(paper_code());
    sts::Philox4x32 rng(2026, 0);
    for (unsigned u : {1u, 30u, 512u}) {
        std::vector<std::uint64_t> pool(512);
        for (unsigned i = 0; i < 512; ++i) pool[i] = i;
        for (unsigned i = 0; i < u; ++i) {
            std::swap(pool[i], pool[i + rng.uniform_below(512 - i)]);
        }
        const std::vector<std::uint64_t> truth(pool.begin(), pool.begin() + u);

        const auto candidates = decoder.decode(perfect_sets(decoder, truth), 1);
        // Distance-14 codewords share no tones: decode returns exactly the
        // transmitted set, every message at full score.
        ASSERT_EQ(candidates.size(), truth.size());
        std::set<std::uint64_t> decoded;
        for (const auto& c : candidates) {
            EXPECT_EQ(c.score, 14u);
            decoded.insert(c.index);
        }
        for (std::uint64_t m : truth) ASSERT_TRUE(decoded.count(m));
    }
}

TEST(MaxUsers, MatchesPaperValuesAndBruteForce) {
    EXPECT_EQ(max_users(CodeParams(GaloisField(4), 14, 2)), 13u);
    EXPECT_EQ(max_users(paper_code()), 512u);
    EXPECT_EQ(max_users(CodeParams(GaloisField(9), 14, 14)), 1u);
    EXPECT_EQ(max_users(CodeParams(GaloisField(3), 7, 1)), 8u);

    // Brute-force oracle: largest U in [1, N] with ceil(N/U) >= K.
    for (unsigned n = 2; n <= 14; ++n) {
        for (unsigned k = 2; k <= n; ++k) {
            const CodeParams params(GaloisField(4), n, k);
            std::uint64_t expected = 1;
            for (unsigned u = 1; u <= params.n; ++u) {
                if ((params.n + u - 1) / u >= params.k) expected = u;
            }
            expected = std::min<std::uint64_t>(expected, params.codeword_count());
            ASSERT_EQ(max_users(params), expected) << "(" << params.n << "," << params.k << ")";
        }
    }
}

TEST(ErrorCapability, ClosedForms) {
    EXPECT_EQ(error_capability(paper_code()), std::make_pair(6u, 13u));
    EXPECT_EQ(error_capability(CodeParams(GaloisField(4), 14, 2)), std::make_pair(6u, 12u));
    EXPECT_EQ(error_capability(CodeParams(GaloisField(9), 14, 14)), std::make_pair(0u, 0u));
}

}  // namespace
