#include "turbodec/train.hpp"

#include <omp.h>

#include <cmath>
#include <string>

#include "turbodec/errors.hpp"
#include "turbodec/rng.hpp"
#include "turbodec/turbo_code.hpp"

namespace turbodec {

namespace {

inline double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Adam {
    double lr, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::vector<double> m, v;
    std::uint64_t t = 0;

    explicit Adam(double lr_, std::size_t n) : lr(lr_), m(n, 0.0), v(n, 0.0) {}

    void update(std::span<double> params, std::span<const double> grad) {
        ++t;
        const double bc1 = 1.0 - std::pow(beta1, double(t));
        const double bc2 = 1.0 - std::pow(beta2, double(t));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
            params[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
        }
    }
};

struct FrameBuffers {
    TurboTape tape;
    TurboTape teacher_tape;
    std::vector<std::uint8_t> message;
    std::vector<double> received, llrs, posterior, teacher_posterior, g_final;
};

ChannelSpec train_channel(const TrainConfig& cfg) {
    ChannelSpec ch;
    ch.kind = cfg.channel_kind;
    ch.snr_db = cfg.train_snr_db;
    ch.sigma_b = cfg.sigma_b;
    ch.rho = cfg.rho;
    return ch;
}

// Draws frame `stream`, decodes it under `weights`, returns its loss
// contribution (unnormalized) and, when wanted, the gradient of the
// TOTAL normalized loss w.r.t. the weights into grad_row.
double frame_loss_and_grad(const TurboCode& code, const TrainConfig& cfg,
                           const DecodeConfig& dcfg, const DecodeConfig& teacher_cfg,
                           std::uint64_t stream, std::size_t batch, FrameBuffers& fb,
                           std::span<double> grad_row) {
    const std::size_t K = code.K;
    auto rng = stream_rng(cfg.seed, stream);

    fb.message.resize(K);
    for (auto& b : fb.message) b = std::uint8_t(rng() & 1u);

    const CodedFrame coded = encode(code, fb.message);
    const std::vector<double> symbols = serialize(code, coded);
    fb.received.resize(symbols.size());
    transmit(symbols, train_channel(cfg), rng, fb.received);
    fb.llrs.resize(symbols.size());
    demap(fb.received, snr_to_sigma(cfg.train_snr_db), fb.llrs);
    const LlrFrame frame = depuncture(code, fb.llrs);

    fb.posterior.resize(K);
    turbo_decode_into(code, frame, dcfg, fb.tape, {}, fb.posterior);

    double loss = 0.0;
    fb.g_final.resize(K);
    if (cfg.loss == LossKind::bce) {
        // per-frame sum of softplus terms; total loss is the batch mean
        for (std::size_t k = 0; k < K; ++k) {
            const double L = fb.posterior[k];
            loss += fb.message[k] ? softplus(-L) : softplus(L);
            fb.g_final[k] = (sigmoid(L) - double(fb.message[k])) / double(batch);
        }
    } else {
        fb.teacher_posterior.resize(K);
        turbo_decode_into(code, frame, teacher_cfg, fb.teacher_tape, {}, fb.teacher_posterior);
        for (std::size_t k = 0; k < K; ++k) {
            const double d = fb.posterior[k] - fb.teacher_posterior[k];
            loss += d * d;
            fb.g_final[k] = 2.0 * d / double(batch * K);
        }
    }

    if (!grad_row.empty()) turbo_backward(code, dcfg, fb.tape, fb.g_final, grad_row);
    return loss;
}

double validation_ber(const TurboCode& code, const TrainConfig& cfg, const DecodeConfig& dcfg,
                      std::vector<FrameBuffers>& buffers) {
    const std::size_t n = cfg.validation_frames;
    // Validation streams live far away from the training streams so the
    // same frames are reused at every checkpoint.
    constexpr std::uint64_t kValidationBase = 1ULL << 62;
    ChannelSpec ch;
    ch.kind = ChannelKind::awgn;
    ch.snr_db = cfg.validation_snr_db;
    const double sigma = snr_to_sigma(cfg.validation_snr_db);

    std::uint64_t errors = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : errors)
    for (std::size_t i = 0; i < n; ++i) {
        FrameBuffers& fb = buffers[omp_get_thread_num()];
        auto rng = stream_rng(cfg.seed, kValidationBase + i);
        fb.message.resize(code.K);
        for (auto& b : fb.message) b = std::uint8_t(rng() & 1u);
        const CodedFrame coded = encode(code, fb.message);
        const std::vector<double> symbols = serialize(code, coded);
        fb.received.resize(symbols.size());
        transmit(symbols, ch, rng, fb.received);
        fb.llrs.resize(symbols.size());
        demap(fb.received, sigma, fb.llrs);
        const LlrFrame frame = depuncture(code, fb.llrs);
        fb.posterior.resize(code.K);
        std::vector<std::uint8_t> bits(code.K);
        turbo_decode_into(code, frame, dcfg, fb.tape, bits, {});
        for (std::size_t k = 0; k < code.K; ++k)
            if (bits[k] != fb.message[k]) ++errors;
    }
    return double(errors) / double(n * code.K);
}

}  // namespace

double bce_loss(std::span<const double> posteriors, std::span<const std::uint8_t> messages,
                std::size_t batch, std::size_t k) {
    if (posteriors.size() != batch * k || messages.size() != batch * k)
        throw ContractError("bce_loss: buffer sizes do not match batch x k");
    double total = 0.0;
    for (std::size_t i = 0; i < batch * k; ++i)
        total += messages[i] ? softplus(-posteriors[i]) : softplus(posteriors[i]);
    return total / double(batch);
}

double mse_teacher_loss(std::span<const double> student, std::span<const double> teacher,
                        std::size_t batch, std::size_t k) {
    if (student.size() != batch * k || teacher.size() != batch * k)
        throw ContractError("mse_teacher_loss: buffer sizes do not match batch x k");
    double total = 0.0;
    for (std::size_t i = 0; i < batch * k; ++i) {
        const double d = student[i] - teacher[i];
        total += d * d;
    }
    return total / double(batch * k);
}

double batch_loss(const TurboCode& code, const TrainConfig& cfg, const WeightSet& weights,
                  std::size_t step, std::span<double> grad) {
    const std::size_t B = cfg.batch_size;
    const std::size_t P = weights.parameter_count();
    const bool want_grad = !grad.empty();
    if (want_grad && grad.size() != P)
        throw ContractError("batch_loss: grad span != parameter count");

    const DecodeConfig dcfg{cfg.iterations, cfg.base_algorithm, weights};
    const DecodeConfig teacher_cfg{cfg.iterations, SisoAlgorithm::map,
                                   WeightSet::classical_set(cfg.iterations)};

    std::vector<FrameBuffers> buffers(omp_get_max_threads());
    std::vector<double> frame_loss(B, 0.0);
    std::vector<double> frame_grad(want_grad ? B * P : 0, 0.0);

#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t b = 0; b < B; ++b) {
        FrameBuffers& fb = buffers[omp_get_thread_num()];
        std::span<double> row =
            want_grad ? std::span<double>(frame_grad).subspan(b * P, P) : std::span<double>{};
        frame_loss[b] = frame_loss_and_grad(code, cfg, dcfg, teacher_cfg,
                                            std::uint64_t(step) * B + b, B, fb, row);
    }

    // Serial reductions in frame order keep results independent of the
    // thread count.
    double loss = 0.0;
    for (double l : frame_loss) loss += l;
    if (cfg.loss == LossKind::bce)
        loss /= double(B);
    else
        loss /= double(B * code.K);
    if (want_grad)
        for (std::size_t b = 0; b < B; ++b)
            for (std::size_t i = 0; i < P; ++i) grad[i] += frame_grad[b * P + i];
    return loss;
}

TrainReport train(const TurboCode& code, const TrainConfig& cfg) {
    if (cfg.batch_size < 1 || cfg.steps < 1)
        throw ContractError("train: batch_size and steps must be >= 1");
    if (cfg.scheme == WeightScheme::classical)
        throw ContractError("train: classical weights are fixed; use shared or positional");

    WeightSet weights = cfg.scheme == WeightScheme::shared
                            ? WeightSet::ones_shared(cfg.iterations)
                            : WeightSet::ones_positional(cfg.iterations, code.K);
    std::vector<double> params = weights.flatten();
    std::vector<double> grad(params.size());
    Adam adam(cfg.learning_rate, params.size());

    TrainReport report;
    report.loss_curve.reserve(cfg.steps);

    std::vector<FrameBuffers> val_buffers(omp_get_max_threads());

    for (std::size_t step = 0; step < cfg.steps; ++step) {
        weights.assign_flat(params);
        std::fill(grad.begin(), grad.end(), 0.0);
        report.loss_curve.push_back(batch_loss(code, cfg, weights, step, grad));

        if (cfg.validation_every && step % cfg.validation_every == 0) {
            const DecodeConfig dcfg{cfg.iterations, cfg.base_algorithm, weights};
            report.ber_curve.emplace_back(step,
                                          validation_ber(code, cfg, dcfg, val_buffers));
        }
        adam.update(params, grad);
    }

    weights.assign_flat(params);
    report.weights = std::move(weights);
    return report;
}

}  // namespace turbodec
