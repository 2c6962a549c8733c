// Test-only reference implementations, deliberately independent of the
// library's decode path: a bit-by-bit RSC stepper driven by the raw
// polynomials, and posterior oracles that enumerate every terminated
// message instead of running forward/backward recursions.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace turbodec::testing {

struct RefRscParams {
    int memory;
    unsigned g1;  // feedforward, bit i = coeff of D^i
    unsigned g2;  // feedback
};

inline constexpr RefRscParams kRefLte{3, 0b1101u, 0b1011u};
inline constexpr RefRscParams kRef757{2, 0b101u, 0b111u};

/// Shift-register stepper over explicit bit vectors.
class RefRsc {
public:
    explicit RefRsc(const RefRscParams& p) : p_(p), reg_(p.memory, 0) {}

    int step(int u);         // consumes u, returns parity
    int termination_bit() const;
    bool in_zero_state() const;

private:
    RefRscParams p_;
    std::vector<int> reg_;
};

/// Encodes message + m termination steps, returning per-step
/// (input, parity) pairs of length K + m.
struct RefCodeword {
    std::vector<int> inputs, parities;
};
RefCodeword ref_rsc_codeword(const RefRscParams& p, std::span<const std::uint8_t> message);

/// Exact per-bit posterior log-odds by brute force over all 2^K
/// terminated messages: lse of path metrics with u_k = 1 minus lse with
/// u_k = 0. max_log = true replaces lse by max (best-path difference).
std::vector<double> enumerate_posteriors(const RefRscParams& p, std::span<const double> sys,
                                         std::span<const double> par,
                                         std::span<const double> prior,
                                         std::span<const double> tail_sys,
                                         std::span<const double> tail_par, bool max_log);

}  // namespace turbodec::testing
