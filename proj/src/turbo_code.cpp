#include "turbodec/turbo_code.hpp"

#include <string>

#include "turbodec/errors.hpp"

namespace turbodec {

namespace {

std::size_t coded_length(std::size_t k, int memory, Puncture puncture) {
    const std::size_t tails = 4 * std::size_t(memory);
    if (puncture == Puncture::none) return 3 * k + tails;
    return k + (k + 1) / 2 + k / 2 + tails;  // all systematic, alternating parity
}

Layout build_layout(std::size_t k, int memory, Puncture puncture) {
    Layout l;
    l.sys.resize(k);
    l.par1.assign(k, -1);
    l.par2.assign(k, -1);
    const std::size_t tail_len = 2 * std::size_t(memory);
    l.tail1.resize(tail_len);
    l.tail2.resize(tail_len);

    std::int32_t pos = 0;
    for (std::size_t i = 0; i < k; ++i) {
        l.sys[i] = pos++;
        const bool keep_p1 = puncture == Puncture::none || i % 2 == 0;
        const bool keep_p2 = puncture == Puncture::none || i % 2 == 1;
        if (keep_p1) l.par1[i] = pos++;
        if (keep_p2) l.par2[i] = pos++;
    }
    for (std::size_t j = 0; j < tail_len; ++j) l.tail1[j] = pos++;
    for (std::size_t j = 0; j < tail_len; ++j) l.tail2[j] = pos++;
    l.total = std::size_t(pos);
    return l;
}

// Runs one constituent encoder over `input`, then drives it to state 0
// with `memory` feedback-forced steps.
void rsc_encode(const Trellis& t, std::span<const std::uint8_t> input,
                std::span<std::uint8_t> parity, std::span<std::uint8_t> tail) {
    int state = 0;
    for (std::size_t k = 0; k < input.size(); ++k) {
        const int u = input[k] & 1;
        parity[k] = t.parity_out[state][u];
        state = t.next_state[state][u];
    }
    for (int j = 0; j < t.memory; ++j) {
        const int u = t.termination_input[state];
        tail[2 * j] = static_cast<std::uint8_t>(u);
        tail[2 * j + 1] = t.parity_out[state][u];
        state = t.next_state[state][u];
    }
}

inline double bpsk(std::uint8_t bit) { return bit ? 1.0 : -1.0; }

}  // namespace

TurboCode make_code(std::size_t k, Trellis trellis, Permutation interleaver, Puncture puncture) {
    if (interleaver.size() != k)
        throw ConfigError("interleaver size does not match blocklength K=" + std::to_string(k));
    TurboCode code;
    code.K = k;
    code.trellis = std::move(trellis);
    code.interleaver = std::move(interleaver);
    code.puncture = puncture;
    code.N = coded_length(k, code.trellis.memory, puncture);
    code.frame_layout = build_layout(k, code.trellis.memory, puncture);
    return code;
}

TurboCode make_code(std::size_t k, Trellis trellis, std::uint64_t f1, std::uint64_t f2,
                    Puncture puncture) {
    return make_code(k, std::move(trellis), qpp(k, f1, f2), puncture);
}

TurboCode make_lte_code(std::size_t k, Puncture puncture) {
    const auto [f1, f2] = lte_qpp_params(k);
    return make_code(k, lte_trellis(), f1, f2, puncture);
}

void encode(const TurboCode& code, std::span<const std::uint8_t> message, CodedFrame& out) {
    if (message.size() != code.K)
        throw ContractError("encode: message length " + std::to_string(message.size()) +
                            " != K=" + std::to_string(code.K));
    const int m = code.trellis.memory;
    out.systematic.assign(message.begin(), message.end());
    out.parity1.resize(code.K);
    out.parity2.resize(code.K);
    out.tail1.resize(2 * m);
    out.tail2.resize(2 * m);

    rsc_encode(code.trellis, message, out.parity1, out.tail1);
    const auto interleaved = code.interleaver.apply(message);
    rsc_encode(code.trellis, interleaved, out.parity2, out.tail2);
}

CodedFrame encode(const TurboCode& code, std::span<const std::uint8_t> message) {
    CodedFrame frame;
    encode(code, message, frame);
    return frame;
}

const Layout& layout(const TurboCode& code) { return code.frame_layout; }

void serialize(const TurboCode& code, const CodedFrame& frame, std::vector<double>& out) {
    const Layout& l = code.frame_layout;
    out.resize(l.total);
    for (std::size_t k = 0; k < code.K; ++k) {
        out[l.sys[k]] = bpsk(frame.systematic[k]);
        if (l.par1[k] >= 0) out[l.par1[k]] = bpsk(frame.parity1[k]);
        if (l.par2[k] >= 0) out[l.par2[k]] = bpsk(frame.parity2[k]);
    }
    for (std::size_t j = 0; j < l.tail1.size(); ++j) {
        out[l.tail1[j]] = bpsk(frame.tail1[j]);
        out[l.tail2[j]] = bpsk(frame.tail2[j]);
    }
}

std::vector<double> serialize(const TurboCode& code, const CodedFrame& frame) {
    std::vector<double> out;
    serialize(code, frame, out);
    return out;
}

void depuncture(const TurboCode& code, std::span<const double> received_llrs, LlrFrame& f) {
    if (received_llrs.size() != code.N)
        throw ContractError("depuncture: expected " + std::to_string(code.N) + " LLRs, got " +
                            std::to_string(received_llrs.size()));
    const Layout& l = code.frame_layout;
    const std::size_t m = std::size_t(code.trellis.memory);
    f.sys.resize(code.K);
    f.par1.assign(code.K, 0.0);
    f.par2.assign(code.K, 0.0);
    f.tail_sys1.resize(m);
    f.tail_par1.resize(m);
    f.tail_sys2.resize(m);
    f.tail_par2.resize(m);

    for (std::size_t k = 0; k < code.K; ++k) {
        f.sys[k] = received_llrs[l.sys[k]];
        if (l.par1[k] >= 0) f.par1[k] = received_llrs[l.par1[k]];
        if (l.par2[k] >= 0) f.par2[k] = received_llrs[l.par2[k]];
    }
    for (std::size_t j = 0; j < m; ++j) {
        f.tail_sys1[j] = received_llrs[l.tail1[2 * j]];
        f.tail_par1[j] = received_llrs[l.tail1[2 * j + 1]];
        f.tail_sys2[j] = received_llrs[l.tail2[2 * j]];
        f.tail_par2[j] = received_llrs[l.tail2[2 * j + 1]];
    }
}

LlrFrame depuncture(const TurboCode& code, std::span<const double> received_llrs) {
    LlrFrame f;
    depuncture(code, received_llrs, f);
    return f;
}

}  // namespace turbodec
