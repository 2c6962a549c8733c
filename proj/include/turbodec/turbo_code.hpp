#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "turbodec/channel.hpp"
#include "turbodec/interleave.hpp"
#include "turbodec/trellis.hpp"

namespace turbodec {

enum class Puncture { none, rate_half_alternating };

/// Position of every logical bit in the serialized stream; -1 when the
/// position is punctured away. Stream order: triplets (s_k, p1_k, p2_k)
/// for k = 0..K-1 with punctured entries omitted, then tail1, then tail2.
struct Layout {
    std::vector<std::int32_t> sys, par1, par2;  // K each
    std::vector<std::int32_t> tail1, tail2;     // 2m each
    std::size_t total = 0;
};

/// Full turbo code definition. N is the serialized frame length:
/// 3K + 4m unpunctured, 2K + 4m under the rate-1/2 pattern.
struct TurboCode {
    std::size_t K = 0;
    Trellis trellis;
    Permutation interleaver;
    Puncture puncture = Puncture::none;
    std::size_t N = 0;
    Layout frame_layout;
};

/// LTE code from the embedded QPP table (throws ConfigError for
/// unsupported K).
TurboCode make_lte_code(std::size_t k, Puncture puncture = Puncture::none);

/// Code over an arbitrary trellis and explicit QPP parameters.
TurboCode make_code(std::size_t k, Trellis trellis, std::uint64_t f1, std::uint64_t f2,
                    Puncture puncture = Puncture::none);
TurboCode make_code(std::size_t k, Trellis trellis, Permutation interleaver, Puncture puncture);

/// One encoded frame before symbol mapping. tail1/tail2 hold the
/// (systematic, parity) pairs of the m feedback-forced termination steps
/// of each constituent encoder, 2m bits each.
struct CodedFrame {
    std::vector<std::uint8_t> systematic, parity1, parity2;  // K each
    std::vector<std::uint8_t> tail1, tail2;                  // 2m each
};

/// Rate-1/3 turbo encoding with independent termination of both
/// constituent encoders. Throws ContractError on length mismatch.
CodedFrame encode(const TurboCode& code, std::span<const std::uint8_t> message);
void encode(const TurboCode& code, std::span<const std::uint8_t> message, CodedFrame& out);

const Layout& layout(const TurboCode& code);

/// BPSK symbols (bit 0 -> -1, bit 1 -> +1) in layout() order.
std::vector<double> serialize(const TurboCode& code, const CodedFrame& frame);
void serialize(const TurboCode& code, const CodedFrame& frame, std::vector<double>& out);

/// Reshapes N received channel LLRs back into per-stream form, restoring
/// punctured positions as LLR 0. Throws ContractError on length mismatch.
LlrFrame depuncture(const TurboCode& code, std::span<const double> received_llrs);
void depuncture(const TurboCode& code, std::span<const double> received_llrs, LlrFrame& out);

}  // namespace turbodec
