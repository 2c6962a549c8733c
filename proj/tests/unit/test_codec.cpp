#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "turbodec/errors.hpp"
#include "turbodec/turbo_code.hpp"

using namespace turbodec;

namespace {

std::vector<std::uint8_t> random_message(std::size_t k, std::mt19937_64& rng) {
    std::vector<std::uint8_t> m(k);
    for (auto& b : m) b = std::uint8_t(rng() & 1u);
    return m;
}

}  // namespace

TEST_CASE("all-zero message encodes to the all-zero frame") {
    const TurboCode code = make_lte_code(40);
    const CodedFrame f = encode(code, std::vector<std::uint8_t>(40, 0));
    const auto symbols = serialize(code, f);
    CHECK(symbols.size() == 132);
    for (double s : symbols) CHECK(s == -1.0);  // bit 0 -> -1
}

TEST_CASE("impulse response of the LTE constituent encoder") {
    const TurboCode code = make_lte_code(40);
    std::vector<std::uint8_t> msg(40, 0);
    msg[0] = 1;
    const CodedFrame f = encode(code, msg);
    // g1/g2 impulse response, first 8 steps (hand-stepped shift register)
    const std::uint8_t expected[8] = {1, 1, 0, 0, 1, 1, 1, 0};
    for (int k = 0; k < 8; ++k) CHECK(f.parity1[k] == expected[k]);
}

TEST_CASE("both encoders terminate in state zero for random messages") {
    std::mt19937_64 rng(11);
    for (const auto& [code, params] :
         {std::pair{make_lte_code(40), testing::kRefLte},
          std::pair{make_code(40, turbo757_trellis(), 3, 10), testing::kRef757}}) {
        for (int trial = 0; trial < 1000; ++trial) {
            const auto msg = random_message(code.K, rng);
            const CodedFrame f = encode(code, msg);
            // reference encoder termination doubles as the check: it
            // throws unless the tail drives the register to zero, and its
            // tail must agree with the frame's
            const auto cw1 = testing::ref_rsc_codeword(params, msg);
            for (int j = 0; j < code.trellis.memory; ++j) {
                CHECK(f.tail1[2 * j] == cw1.inputs[code.K + j]);
                CHECK(f.tail1[2 * j + 1] == cw1.parities[code.K + j]);
            }
            const auto interleaved = code.interleaver.apply(msg);
            const auto cw2 = testing::ref_rsc_codeword(params, interleaved);
            for (std::size_t k = 0; k < code.K; ++k) {
                CHECK(f.parity1[k] == cw1.parities[k]);
                CHECK(f.parity2[k] == cw2.parities[k]);
            }
        }
    }
}

TEST_CASE("encoder is linear over GF(2)") {
    const TurboCode code = make_lte_code(104);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_message(code.K, rng);
        const auto b = random_message(code.K, rng);
        std::vector<std::uint8_t> ab(code.K);
        for (std::size_t k = 0; k < code.K; ++k) ab[k] = a[k] ^ b[k];
        const CodedFrame fa = encode(code, a), fb = encode(code, b), fab = encode(code, ab);
        for (std::size_t k = 0; k < code.K; ++k) {
            CHECK((fa.systematic[k] ^ fb.systematic[k]) == fab.systematic[k]);
            CHECK((fa.parity1[k] ^ fb.parity1[k]) == fab.parity1[k]);
            CHECK((fa.parity2[k] ^ fb.parity2[k]) == fab.parity2[k]);
        }
        for (std::size_t j = 0; j < fa.tail1.size(); ++j) {
            CHECK((fa.tail1[j] ^ fb.tail1[j]) == fab.tail1[j]);
            CHECK((fa.tail2[j] ^ fb.tail2[j]) == fab.tail2[j]);
        }
    }
}

TEST_CASE("serialized lengths match the paper's code sizes") {
    CHECK(make_lte_code(40).N == 132);
    CHECK(make_lte_code(40, Puncture::rate_half_alternating).N == 92);
    CHECK(make_lte_code(200).N == 612);
    CHECK(make_lte_code(200, Puncture::rate_half_alternating).N == 412);
    CHECK(make_lte_code(1008).N == 3036);
    CHECK(make_code(40, turbo757_trellis(), 3, 10).N == 128);
    CHECK(make_lte_code(104).N == 324);
}

TEST_CASE("layout covers every stream position exactly once") {
    for (Puncture p : {Puncture::none, Puncture::rate_half_alternating}) {
        const TurboCode code = make_lte_code(40, p);
        const Layout& l = layout(code);
        CHECK(l.total == code.N);
        std::vector<int> hits(l.total, 0);
        auto mark = [&](std::int32_t pos) {
            if (pos >= 0) ++hits[pos];
        };
        for (std::size_t k = 0; k < code.K; ++k) {
            mark(l.sys[k]);
            mark(l.par1[k]);
            mark(l.par2[k]);
        }
        for (std::size_t j = 0; j < l.tail1.size(); ++j) {
            mark(l.tail1[j]);
            mark(l.tail2[j]);
        }
        for (int h : hits) CHECK(h == 1);
    }
}

TEST_CASE("depuncture restores surviving values and zeroes the rest") {
    std::mt19937_64 rng(23);
    const TurboCode code = make_lte_code(40, Puncture::rate_half_alternating);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> llrs(code.N);
        for (auto& x : llrs) x = std::uniform_real_distribution<double>(-9, 9)(rng);
        const LlrFrame f = depuncture(code, llrs);
        const Layout& l = layout(code);
        for (std::size_t k = 0; k < code.K; ++k) {
            CHECK(f.sys[k] == llrs[l.sys[k]]);
            if (l.par1[k] >= 0)
                CHECK(f.par1[k] == llrs[l.par1[k]]);
            else
                CHECK(f.par1[k] == 0.0);
            if (l.par2[k] >= 0)
                CHECK(f.par2[k] == llrs[l.par2[k]]);
            else
                CHECK(f.par2[k] == 0.0);
        }
    }
    // unpunctured: identity reshaping round trip
    const TurboCode full = make_lte_code(40);
    std::vector<std::uint8_t> msg(40);
    for (auto& b : msg) b = std::uint8_t(rng() & 1u);
    const auto symbols = serialize(full, encode(full, msg));
    const LlrFrame f = depuncture(full, symbols);
    const Layout& l = layout(full);
    for (std::size_t k = 0; k < full.K; ++k) {
        CHECK(f.sys[k] == symbols[l.sys[k]]);
        CHECK(f.par1[k] == symbols[l.par1[k]]);
        CHECK(f.par2[k] == symbols[l.par2[k]]);
    }
}

TEST_CASE("contract errors on bad lengths") {
    const TurboCode code = make_lte_code(40);
    CHECK_THROWS_AS(encode(code, std::vector<std::uint8_t>(39, 0)), ContractError);
    CHECK_THROWS_AS(depuncture(code, std::vector<double>(131, 0.0)), ContractError);
}
