#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "turbodec/siso.hpp"
#include "turbodec/turbo_code.hpp"

namespace turbodec {

/// How the extrinsic-scaling weights are organized.
/// classical: all weights fixed at 1 (the textbook decoder).
/// shared: 6 scalars per iteration (a1,a2,a3 for the first half-iteration,
///         b1,b2,b3 for the second), reusable across blocklengths.
/// positional: 6 length-K vectors per iteration.
enum class WeightScheme { classical, shared, positional };

const char* to_string(WeightScheme scheme);
WeightScheme scheme_from_name(const std::string& name);

struct WeightSet {
    WeightScheme scheme = WeightScheme::classical;
    int iterations = 3;
    std::size_t block_length = 0;  // positional only

    std::vector<std::array<double, 6>> shared;                      // [iter][slot]
    std::vector<std::array<std::vector<double>, 6>> positional;     // [iter][slot][k]

    static WeightSet classical_set(int iterations);
    static WeightSet ones_shared(int iterations);
    static WeightSet ones_positional(int iterations, std::size_t block_length);

    /// 0 for classical, 6M for shared, 6MK for positional.
    std::size_t parameter_count() const;

    /// Flat parameter view in [iteration][slot][position] order.
    std::vector<double> flatten() const;
    void assign_flat(std::span<const double> params);

    /// Throws ContractError unless sizes are consistent with `iterations`
    /// and, for positional, with blocklength k.
    void validate(std::size_t k) const;
};

/// The shipped trained weight set: shared scheme, 3 iterations,
/// 18 scalars, trained on the K=40 rate-1/3 LTE code at -1 dB over a
/// max-log base decoder. Generalizes across blocklengths, rates, and
/// trellises.
WeightSet pretrained_weights();

struct DecodeConfig {
    int iterations = 3;
    SisoAlgorithm algorithm = SisoAlgorithm::max_log_map;
    WeightSet weights;
};

/// out[k] = w1*posterior[k] - w2*sys[k] - w3*prior[k].
void weighted_extrinsic(std::span<const double> posterior, std::span<const double> sys,
                        std::span<const double> prior, const std::array<double, 3>& w,
                        std::span<double> out);
/// Per-position form: out[k] = w1[k]*posterior[k] - w2[k]*sys[k] - w3[k]*prior[k].
void weighted_extrinsic(std::span<const double> posterior, std::span<const double> sys,
                        std::span<const double> prior, std::span<const double> w1,
                        std::span<const double> w2, std::span<const double> w3,
                        std::span<double> out);

/// Per-iteration state kept by a recorded decode; doubles as reusable
/// scratch so per-frame decoding allocates nothing in steady state.
struct TurboIterTape {
    SisoWorkspace ws1, ws2;
    std::vector<double> prior1, post1;  // message order
    std::vector<double> prior2, post2;  // interleaved order
};

struct TurboTape {
    std::vector<TurboIterTape> iters;
    std::vector<double> sys1;  // copy of the frame's systematic LLRs
    std::vector<double> sys2;  // same, interleaved
    std::vector<double> ext;   // current weighted extrinsic
    std::vector<double> scratch_ext;
    bool recorded = false;

    // backward scratch
    SisoGrad sg;
    std::vector<double> g_ext, g_post, g_prior;
};

struct IterationRecord {
    std::vector<double> d1_posterior;  // first half-iteration, message order
    std::vector<double> d2_posterior;  // second half-iteration, deinterleaved
};

struct DecodeResult {
    std::vector<std::uint8_t> bits;
    std::vector<double> posterior;  // final posterior, message order
    std::vector<IterationRecord> trajectory;
};

/// Iterative decode: per iteration, D1 over (sys, par1) with the prior
/// deinterleaved from D2 (zero initially), weighted extrinsic with the
/// a-weights interleaved into D2 over (interleaved sys, par2), weighted
/// extrinsic with the b-weights fed back. Hard decision u = 1{L > 0}
/// from the last D2 posterior, deinterleaved.
DecodeResult turbo_decode(const TurboCode& code, const LlrFrame& frame, const DecodeConfig& cfg,
                          TurboTape* tape = nullptr);

/// Allocation-free variant for tight Monte-Carlo loops: hard bits and
/// (optionally, pass empty otherwise) the final posterior.
void turbo_decode_into(const TurboCode& code, const LlrFrame& frame, const DecodeConfig& cfg,
                       TurboTape& tape, std::span<std::uint8_t> bits_out,
                       std::span<double> posterior_out);

/// Reverse-mode pass through the unrolled decoder: accumulates the
/// gradient of a scalar loss into grad_flat (layout of
/// WeightSet::flatten, length parameter_count()), given the loss
/// gradient w.r.t. the final posterior. Requires a recorded tape and a
/// shared or positional scheme.
void turbo_backward(const TurboCode& code, const DecodeConfig& cfg, TurboTape& tape,
                    std::span<const double> g_final_posterior, std::span<double> grad_flat);

}  // namespace turbodec
