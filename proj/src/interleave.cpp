#include "turbodec/interleave.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace turbodec {

Permutation identity_permutation(std::size_t k) {
    Permutation p;
    p.forward.resize(k);
    p.inverse.resize(k);
    for (std::size_t i = 0; i < k; ++i) p.forward[i] = p.inverse[i] = std::int32_t(i);
    return p;
}

Permutation qpp(std::size_t k, std::uint64_t f1, std::uint64_t f2) {
    if (k < 1) throw ConfigError("qpp: blocklength must be >= 1");
    Permutation p;
    p.forward.resize(k);
    p.inverse.assign(k, -1);
    const std::uint64_t kk = k;
    for (std::uint64_t i = 0; i < kk; ++i) {
        const std::uint64_t idx = ((f1 % kk) * i + (f2 % kk) * ((i * i) % kk)) % kk;
        if (p.inverse[idx] != -1)
            throw ConfigError("qpp: (K=" + std::to_string(k) + ", f1=" + std::to_string(f1) +
                              ", f2=" + std::to_string(f2) + ") is not a bijection");
        p.forward[i] = std::int32_t(idx);
        p.inverse[idx] = std::int32_t(i);
    }
    return p;
}

namespace {

struct QppEntry {
    std::size_t k;
    std::uint64_t f1, f2;
};

// 3GPP TS 36.212 Table 5.1.3-3 (subset used here).
constexpr std::array<QppEntry, 4> kLteQpp = {{
    {40, 3, 10},
    {104, 7, 26},
    {200, 13, 50},
    {1008, 55, 84},
}};

constexpr std::array<std::size_t, 4> kLteBlocklengths = {40, 104, 200, 1008};

}  // namespace

std::pair<std::uint64_t, std::uint64_t> lte_qpp_params(std::size_t k) {
    for (const auto& e : kLteQpp)
        if (e.k == k) return {e.f1, e.f2};
    std::string supported;
    for (const auto& e : kLteQpp) supported += (supported.empty() ? "" : ", ") + std::to_string(e.k);
    throw ConfigError("no embedded QPP parameters for K=" + std::to_string(k) +
                      " (supported: " + supported + "); pass f1/f2 explicitly");
}

std::span<const std::size_t> lte_qpp_blocklengths() { return kLteBlocklengths; }

}  // namespace turbodec
