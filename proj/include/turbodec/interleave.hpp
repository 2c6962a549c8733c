#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "turbodec/errors.hpp"

namespace turbodec {

/// Bijection on {0, ..., K-1} with its inverse precomputed.
///
/// Convention (read-address form): apply(in)[i] = in[forward[i]].
/// apply_inverse undoes apply. Both directions appear in the literature;
/// everything in this project uses this one.
struct Permutation {
    std::vector<std::int32_t> forward;
    std::vector<std::int32_t> inverse;

    std::size_t size() const { return forward.size(); }

    template <class T>
    std::vector<T> apply(std::span<const T> seq) const {
        if (seq.size() != size())
            throw ContractError("apply: sequence length does not match permutation size");
        std::vector<T> out(seq.size());
        for (std::size_t i = 0; i < seq.size(); ++i) out[i] = seq[forward[i]];
        return out;
    }

    template <class T>
    std::vector<T> apply_inverse(std::span<const T> seq) const {
        if (seq.size() != size())
            throw ContractError("apply_inverse: sequence length does not match permutation size");
        std::vector<T> out(seq.size());
        for (std::size_t i = 0; i < seq.size(); ++i) out[i] = seq[inverse[i]];
        return out;
    }

    template <class T>
    std::vector<T> apply(const std::vector<T>& seq) const {
        return apply(std::span<const T>(seq));
    }

    template <class T>
    std::vector<T> apply_inverse(const std::vector<T>& seq) const {
        return apply_inverse(std::span<const T>(seq));
    }
};

Permutation identity_permutation(std::size_t k);

/// Quadratic permutation polynomial pi(i) = (f1*i + f2*i^2) mod K.
/// Throws ConfigError if (K, f1, f2) does not yield a bijection.
Permutation qpp(std::size_t k, std::uint64_t f1, std::uint64_t f2);

/// (f1, f2) from the embedded 3GPP TS 36.212 Table 5.1.3-3 entries.
/// Throws ConfigError for blocklengths not in the table.
std::pair<std::uint64_t, std::uint64_t> lte_qpp_params(std::size_t k);

/// Blocklengths available to lte_qpp_params.
std::span<const std::size_t> lte_qpp_blocklengths();

}  // namespace turbodec
