#include "turbodec/turbo_decoder.hpp"

#include <algorithm>
#include <string>

#include "turbodec/errors.hpp"

namespace turbodec {

const char* to_string(WeightScheme scheme) {
    switch (scheme) {
        case WeightScheme::classical: return "classical";
        case WeightScheme::shared: return "shared";
        case WeightScheme::positional: return "positional";
    }
    return "classical";
}

WeightScheme scheme_from_name(const std::string& name) {
    if (name == "classical") return WeightScheme::classical;
    if (name == "shared") return WeightScheme::shared;
    if (name == "positional") return WeightScheme::positional;
    throw ConfigError("unknown weight scheme '" + name + "'");
}

WeightSet WeightSet::classical_set(int iterations) {
    WeightSet w;
    w.scheme = WeightScheme::classical;
    w.iterations = iterations;
    return w;
}

WeightSet WeightSet::ones_shared(int iterations) {
    WeightSet w;
    w.scheme = WeightScheme::shared;
    w.iterations = iterations;
    w.shared.assign(iterations, {1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
    return w;
}

WeightSet WeightSet::ones_positional(int iterations, std::size_t block_length) {
    WeightSet w;
    w.scheme = WeightScheme::positional;
    w.iterations = iterations;
    w.block_length = block_length;
    w.positional.resize(iterations);
    for (auto& row : w.positional)
        for (auto& slot : row) slot.assign(block_length, 1.0);
    return w;
}

std::size_t WeightSet::parameter_count() const {
    switch (scheme) {
        case WeightScheme::classical: return 0;
        case WeightScheme::shared: return 6 * std::size_t(iterations);
        case WeightScheme::positional: return 6 * std::size_t(iterations) * block_length;
    }
    return 0;
}

std::vector<double> WeightSet::flatten() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    if (scheme == WeightScheme::shared) {
        for (const auto& row : shared)
            for (double v : row) out.push_back(v);
    } else if (scheme == WeightScheme::positional) {
        for (const auto& row : positional)
            for (const auto& slot : row) out.insert(out.end(), slot.begin(), slot.end());
    }
    return out;
}

void WeightSet::assign_flat(std::span<const double> params) {
    if (params.size() != parameter_count())
        throw ContractError("WeightSet::assign_flat: parameter count mismatch");
    std::size_t idx = 0;
    if (scheme == WeightScheme::shared) {
        for (auto& row : shared)
            for (double& v : row) v = params[idx++];
    } else if (scheme == WeightScheme::positional) {
        for (auto& row : positional)
            for (auto& slot : row)
                for (double& v : slot) v = params[idx++];
    }
}

void WeightSet::validate(std::size_t k) const {
    if (iterations < 1) throw ContractError("WeightSet: iterations must be >= 1");
    switch (scheme) {
        case WeightScheme::classical:
            break;
        case WeightScheme::shared:
            if (shared.size() != std::size_t(iterations))
                throw ContractError("WeightSet: expected 6 scalars per iteration, got " +
                                    std::to_string(shared.size()) + " rows for " +
                                    std::to_string(iterations) + " iterations");
            break;
        case WeightScheme::positional:
            if (positional.size() != std::size_t(iterations))
                throw ContractError("WeightSet: positional rows != iterations");
            if (block_length != k)
                throw ContractError("WeightSet: positional blocklength " +
                                    std::to_string(block_length) + " != code K=" +
                                    std::to_string(k));
            for (const auto& row : positional)
                for (const auto& slot : row)
                    if (slot.size() != k)
                        throw ContractError("WeightSet: positional vector length != K");
            break;
    }
}

WeightSet pretrained_weights() {
    WeightSet w;
    w.scheme = WeightScheme::shared;
    w.iterations = 3;
    w.shared = {
        {0.445, 0.584, 1.0, 0.641, 0.779, 0.662},
        {0.834, 0.795, 0.725, 0.863, 0.716, 0.645},
        {0.911, 0.715, 0.638, 0.263, 0.616, 0.938},
    };
    return w;
}

void weighted_extrinsic(std::span<const double> posterior, std::span<const double> sys,
                        std::span<const double> prior, const std::array<double, 3>& w,
                        std::span<double> out) {
    const std::size_t n = posterior.size();
    if (sys.size() != n || prior.size() != n || out.size() != n)
        throw ContractError("weighted_extrinsic: length mismatch");
    for (std::size_t k = 0; k < n; ++k)
        out[k] = w[0] * posterior[k] - w[1] * sys[k] - w[2] * prior[k];
}

void weighted_extrinsic(std::span<const double> posterior, std::span<const double> sys,
                        std::span<const double> prior, std::span<const double> w1,
                        std::span<const double> w2, std::span<const double> w3,
                        std::span<double> out) {
    const std::size_t n = posterior.size();
    if (sys.size() != n || prior.size() != n || out.size() != n || w1.size() != n ||
        w2.size() != n || w3.size() != n)
        throw ContractError("weighted_extrinsic: length mismatch");
    for (std::size_t k = 0; k < n; ++k)
        out[k] = w1[k] * posterior[k] - w2[k] * sys[k] - w3[k] * prior[k];
}

namespace {

// Uniform view over the three schemes: weight j of iteration i at
// position k. half = 0 selects a-weights, half = 1 the b-weights.
struct IterWeights {
    const WeightSet* ws;
    int iter;
    int half;

    double at(int j, std::size_t k) const {
        switch (ws->scheme) {
            case WeightScheme::classical: return 1.0;
            case WeightScheme::shared: return ws->shared[iter][half * 3 + j];
            case WeightScheme::positional: return ws->positional[iter][half * 3 + j][k];
        }
        return 1.0;
    }
};

void scale_extrinsic(const IterWeights& w, std::span<const double> posterior,
                     std::span<const double> sys, std::span<const double> prior,
                     std::span<double> out) {
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = w.at(0, k) * posterior[k] - w.at(1, k) * sys[k] - w.at(2, k) * prior[k];
}

void check_frame(const TurboCode& code, const LlrFrame& frame) {
    const std::size_t m = std::size_t(code.trellis.memory);
    if (frame.sys.size() != code.K || frame.par1.size() != code.K || frame.par2.size() != code.K)
        throw ContractError("turbo_decode: frame stream lengths != K");
    if (frame.tail_sys1.size() != m || frame.tail_par1.size() != m ||
        frame.tail_sys2.size() != m || frame.tail_par2.size() != m)
        throw ContractError("turbo_decode: tail lengths != trellis memory");
}

void permute_into(const Permutation& p, std::span<const double> in, std::vector<double>& out) {
    out.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[p.forward[i]];
}

void unpermute_into(const Permutation& p, std::span<const double> in, std::vector<double>& out) {
    out.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[p.inverse[i]];
}

void run_decode(const TurboCode& code, const LlrFrame& frame, const DecodeConfig& cfg,
                TurboTape& tape) {
    check_frame(code, frame);
    cfg.weights.validate(code.K);
    if (cfg.weights.iterations != cfg.iterations)
        throw ContractError("DecodeConfig: weight set covers " +
                            std::to_string(cfg.weights.iterations) + " iterations, config asks " +
                            std::to_string(cfg.iterations));

    const std::size_t K = code.K;
    const int M = cfg.iterations;
    tape.iters.resize(M);
    tape.scratch_ext.resize(K);
    tape.ext.resize(K);
    tape.sys1.assign(frame.sys.begin(), frame.sys.end());
    permute_into(code.interleaver, frame.sys, tape.sys2);

    for (int i = 0; i < M; ++i) {
        TurboIterTape& it = tape.iters[i];
        it.post1.resize(K);
        it.post2.resize(K);
        // prior1 of iterations > 0 was filled by the previous iteration.
        if (i == 0) it.prior1.assign(K, 0.0);

        const SisoInput in1{frame.sys, frame.par1, it.prior1, frame.tail_sys1, frame.tail_par1};
        siso_decode(code.trellis, in1, cfg.algorithm, it.post1, tape.scratch_ext, &it.ws1);
        scale_extrinsic({&cfg.weights, i, 0}, it.post1, frame.sys, it.prior1, tape.ext);
        permute_into(code.interleaver, tape.ext, it.prior2);

        const SisoInput in2{tape.sys2, frame.par2, it.prior2, frame.tail_sys2, frame.tail_par2};
        siso_decode(code.trellis, in2, cfg.algorithm, it.post2, tape.scratch_ext, &it.ws2);
        if (i + 1 < M) {
            scale_extrinsic({&cfg.weights, i, 1}, it.post2, tape.sys2, it.prior2, tape.ext);
            unpermute_into(code.interleaver, tape.ext, tape.iters[i + 1].prior1);
        }
    }
    tape.recorded = true;
}

}  // namespace

void turbo_decode_into(const TurboCode& code, const LlrFrame& frame, const DecodeConfig& cfg,
                       TurboTape& tape, std::span<std::uint8_t> bits_out,
                       std::span<double> posterior_out) {
    run_decode(code, frame, cfg, tape);
    const std::vector<double>& post2 = tape.iters.back().post2;
    const Permutation& p = code.interleaver;
    if (!bits_out.empty()) {
        if (bits_out.size() != code.K) throw ContractError("turbo_decode_into: bits span != K");
        for (std::size_t k = 0; k < code.K; ++k) bits_out[k] = post2[p.inverse[k]] > 0.0 ? 1 : 0;
    }
    if (!posterior_out.empty()) {
        if (posterior_out.size() != code.K)
            throw ContractError("turbo_decode_into: posterior span != K");
        for (std::size_t k = 0; k < code.K; ++k) posterior_out[k] = post2[p.inverse[k]];
    }
}

DecodeResult turbo_decode(const TurboCode& code, const LlrFrame& frame, const DecodeConfig& cfg,
                          TurboTape* tape) {
    TurboTape local;
    TurboTape& t = tape ? *tape : local;
    DecodeResult res;
    res.bits.resize(code.K);
    res.posterior.resize(code.K);
    turbo_decode_into(code, frame, cfg, t, res.bits, res.posterior);

    res.trajectory.resize(t.iters.size());
    for (std::size_t i = 0; i < t.iters.size(); ++i) {
        res.trajectory[i].d1_posterior = t.iters[i].post1;
        res.trajectory[i].d2_posterior =
            code.interleaver.apply_inverse(std::span<const double>(t.iters[i].post2));
    }
    return res;
}

// Adjoint of run_decode with respect to the weights. Iterations unwind
// last to first; the permutations' adjoints are their inverses.

void turbo_backward(const TurboCode& code, const DecodeConfig& cfg, TurboTape& tape,
                    std::span<const double> g_final_posterior, std::span<double> grad_flat) {
    if (!tape.recorded) throw ContractError("turbo_backward: tape holds no recorded decode");
    if (cfg.weights.scheme == WeightScheme::classical)
        throw ContractError("turbo_backward: classical weights have no parameters");
    if (g_final_posterior.size() != code.K)
        throw ContractError("turbo_backward: gradient length != K");
    if (grad_flat.size() != cfg.weights.parameter_count())
        throw ContractError("turbo_backward: grad span != parameter count");

    const std::size_t K = code.K;
    const int M = cfg.iterations;
    const bool positional = cfg.weights.scheme == WeightScheme::positional;
    const std::size_t slot_stride = positional ? K : 1;

    // grad_flat layout matches WeightSet::flatten: [iter][slot][position]
    auto gw = [&](int i, int slot, std::size_t k) -> double& {
        return grad_flat[(std::size_t(i) * 6 + slot) * slot_stride + (positional ? k : 0)];
    };

    std::vector<double>& g_ext = tape.g_ext;
    std::vector<double>& g_post = tape.g_post;
    std::vector<double>& g_prior = tape.g_prior;  // w.r.t. prior1 of iteration i+1
    g_ext.assign(K, 0.0);
    g_post.assign(K, 0.0);
    g_prior.assign(K, 0.0);

    const Permutation& p = code.interleaver;

    for (int i = M - 1; i >= 0; --i) {
        TurboIterTape& it = tape.iters[i];
        const IterWeights wa{&cfg.weights, i, 0};
        const IterWeights wb{&cfg.weights, i, 1};

        // Second half-iteration. ext2 fed prior1 of iteration i+1 through
        // the deinterleaver; the last iteration's posterior is the output
        // itself and its ext2 has no consumer.
        if (i == M - 1) {
            for (std::size_t k = 0; k < K; ++k) g_post[k] = g_final_posterior[p.forward[k]];
        } else {
            for (std::size_t k = 0; k < K; ++k) g_ext[k] = g_prior[p.forward[k]];
            for (std::size_t k = 0; k < K; ++k) {
                gw(i, 3, k) += g_ext[k] * it.post2[k];
                gw(i, 4, k) -= g_ext[k] * tape.sys2[k];
                gw(i, 5, k) -= g_ext[k] * it.prior2[k];
            }
            for (std::size_t k = 0; k < K; ++k) g_post[k] = wb.at(0, k) * g_ext[k];
        }

        siso_backward(code.trellis, it.ws2, g_post, {}, tape.sg);
        if (i != M - 1)
            for (std::size_t k = 0; k < K; ++k) tape.sg.prior[k] -= wb.at(2, k) * g_ext[k];

        // First half-iteration: prior2 = interleave(ext1).
        for (std::size_t k = 0; k < K; ++k) g_ext[p.forward[k]] = tape.sg.prior[k];
        for (std::size_t k = 0; k < K; ++k) {
            gw(i, 0, k) += g_ext[k] * it.post1[k];
            gw(i, 1, k) -= g_ext[k] * tape.sys1[k];
            gw(i, 2, k) -= g_ext[k] * it.prior1[k];
        }
        for (std::size_t k = 0; k < K; ++k) g_post[k] = wa.at(0, k) * g_ext[k];
        siso_backward(code.trellis, it.ws1, g_post, {}, tape.sg);
        for (std::size_t k = 0; k < K; ++k)
            g_prior[k] = tape.sg.prior[k] - wa.at(2, k) * g_ext[k];
    }
}

}  // namespace turbodec
