#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "turbodec/trellis.hpp"

namespace turbodec {

/// Arithmetic used by the forward/backward recursions: exact
/// log-sum-exp, or its max approximation.
enum class SisoAlgorithm { map, max_log_map };

const char* to_string(SisoAlgorithm alg);
SisoAlgorithm algorithm_from_name(const std::string& name);  // "map" | "maxlog"

/// Soft inputs of one constituent decode: channel LLRs for the
/// systematic and parity streams, the prior over message bits, and the
/// tail LLRs of this encoder's termination. All values finite.
struct SisoInput {
    std::span<const double> sys, par, prior;     // K each
    std::span<const double> tail_sys, tail_par;  // memory each
};

/// Log-domain branch metric
///   1/2 (x_sys * sys_llr + x_par * par_llr) + 1/2 s(u) * prior
/// with s(u) = +1 for u = 1 and -1 for u = 0.
double branch_metric(double sys_llr, double par_llr, double prior, int x_sys, int x_par, int u);

/// Numerically stable log(exp(z1) + ... + exp(zn)). Returns -inf for an
/// all-(-inf) input (empty path set).
double lse(std::span<const double> values);

/// The max-log counterpart of lse().
double max_of(std::span<const double> values);

/// Two-term stable log-sum-exp; the recursions' building block.
double lse2(double a, double b);

/// d lse2(a,b) / d(a,b): the softmax pair.
std::pair<double, double> lse2_grad(double a, double b);

/// Subgradient of max(a,b): all mass on the first argmax.
std::pair<double, double> max2_grad(double a, double b);

/// Everything a recorded forward pass leaves behind: branch metrics and
/// normalized forward/backward state metrics, enough to replay the
/// recursions in reverse. Reusable across calls; buffers grow on demand.
struct SisoWorkspace {
    int K = 0;
    int memory = 0;
    int num_states = 0;
    SisoAlgorithm algorithm = SisoAlgorithm::map;
    bool recorded = false;

    std::vector<double> alpha;  // (K+m+1) x num_states, row-normalized
    std::vector<double> beta;   // same shape
    std::vector<double> gamma;  // (K+m) x 4, indexed [t][u][parity]

    // scratch used by siso_backward
    std::vector<double> galpha, gbeta, ggamma;

    double* alpha_row(int t) { return alpha.data() + std::size_t(t) * num_states; }
    double* beta_row(int t) { return beta.data() + std::size_t(t) * num_states; }
    double* gamma_row(int t) { return gamma.data() + std::size_t(t) * 4; }
    const double* alpha_row(int t) const { return alpha.data() + std::size_t(t) * num_states; }
    const double* beta_row(int t) const { return beta.data() + std::size_t(t) * num_states; }
    const double* gamma_row(int t) const { return gamma.data() + std::size_t(t) * 4; }
};

/// BCJR decode of one constituent code. posterior[k] is the log-odds of
/// message bit k given this code's observations and the prior;
/// extrinsic[k] = posterior[k] - sys[k] - prior[k]. The recursions run
/// K + memory steps; tail steps use the tail LLRs, zero prior, and emit
/// no output. With a workspace the pass is recorded for siso_backward.
void siso_decode(const Trellis& trellis, const SisoInput& input, SisoAlgorithm alg,
                 std::span<double> posterior, std::span<double> extrinsic,
                 SisoWorkspace* ws = nullptr);

struct SisoResult {
    std::vector<double> posterior, extrinsic;
};

SisoResult siso_decode(const Trellis& trellis, const SisoInput& input, SisoAlgorithm alg,
                       SisoWorkspace* ws = nullptr);

/// Gradients with respect to every SisoInput field.
struct SisoGrad {
    std::vector<double> sys, par, prior;
    std::vector<double> tail_sys, tail_par;
};

/// Reverse-mode pass through a recorded decode. Either upstream span may
/// be empty (treated as zero). In max mode the whole gradient follows
/// the first argmax branch; in map mode gradients are softmax-weighted.
/// Throws ContractError if the workspace was not recorded.
void siso_backward(const Trellis& trellis, SisoWorkspace& ws,
                   std::span<const double> g_posterior, std::span<const double> g_extrinsic,
                   SisoGrad& grad);

namespace detail {

/// Recursions over an explicit branch-metric table (gamma laid out
/// [t][u][parity], t < K + memory); exposed for tests that perturb
/// branch metrics directly. Fills ws.alpha/ws.beta and the posteriors.
void siso_forward_core(const Trellis& trellis, int k_len, SisoAlgorithm alg, SisoWorkspace& ws,
                       std::span<double> posterior);

}  // namespace detail

}  // namespace turbodec
