#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "turbodec/errors.hpp"
#include "turbodec/interleave.hpp"

using namespace turbodec;

TEST_CASE("qpp(40,3,10)") {
    const Permutation p = qpp(40, 3, 10);
    CHECK(p.forward[0] == 0);
    CHECK(p.forward[1] == 13);  // (3*1 + 10*1) mod 40
    auto sorted = p.forward;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 40; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("embedded LTE table entries are bijective") {
    for (std::size_t k : lte_qpp_blocklengths()) {
        const auto [f1, f2] = lte_qpp_params(k);
        const Permutation p = qpp(k, f1, f2);  // qpp throws on duplicates
        for (std::size_t i = 0; i < k; ++i) CHECK(p.inverse[p.forward[i]] == std::int32_t(i));
    }
}

TEST_CASE("unsupported blocklength names the supported ones") {
    CHECK_THROWS_WITH_AS(lte_qpp_params(41), doctest::Contains("40"), ConfigError);
}

TEST_CASE("non-bijective parameters rejected") {
    CHECK_THROWS_AS(qpp(8, 2, 0), ConfigError);  // even f1, K even
}

TEST_CASE("apply follows the read-address convention") {
    const Permutation p = qpp(40, 3, 10);
    std::vector<double> seq(40);
    std::iota(seq.begin(), seq.end(), 0.0);
    const auto out = p.apply(seq);
    CHECK(out[1] == 13.0);

    const Permutation id = identity_permutation(40);
    CHECK(id.apply(seq) == seq);
}

TEST_CASE("apply_inverse undoes apply on random permutations") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 1 + rng() % 200;
        Permutation p;
        p.forward.resize(k);
        std::iota(p.forward.begin(), p.forward.end(), 0);
        std::shuffle(p.forward.begin(), p.forward.end(), rng);
        p.inverse.resize(k);
        for (std::size_t i = 0; i < k; ++i) p.inverse[p.forward[i]] = std::int32_t(i);

        std::vector<double> seq(k);
        for (auto& x : seq) x = std::uniform_real_distribution<double>(-5, 5)(rng);
        CHECK(p.apply_inverse(p.apply(seq)) == seq);
        CHECK(p.apply(p.apply_inverse(seq)) == seq);
    }
}

TEST_CASE("length mismatch is a contract error") {
    const Permutation p = qpp(40, 3, 10);
    std::vector<double> wrong(39, 0.0);
    CHECK_THROWS_AS(p.apply(wrong), ContractError);
    CHECK_THROWS_AS(p.apply_inverse(wrong), ContractError);
}
