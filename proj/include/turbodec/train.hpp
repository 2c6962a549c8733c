#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "turbodec/channel.hpp"
#include "turbodec/turbo_decoder.hpp"

namespace turbodec {

enum class LossKind { bce, mse_to_teacher };

struct TrainConfig {
    LossKind loss = LossKind::bce;
    double learning_rate = 8e-4;
    std::size_t batch_size = 1000;
    double train_snr_db = -1.0;
    std::size_t steps = 5000;
    SisoAlgorithm base_algorithm = SisoAlgorithm::max_log_map;
    WeightScheme scheme = WeightScheme::shared;
    int iterations = 3;
    std::uint64_t seed = 0;

    // Channel the training frames pass through. AWGN by default; the
    // bursty kind supports retraining experiments.
    ChannelKind channel_kind = ChannelKind::awgn;
    double sigma_b = 0.0;
    double rho = 0.0;

    // Periodic validation BER (instrumentation only, never gates
    // updates). 0 disables.
    std::size_t validation_every = 100;
    std::size_t validation_frames = 1000;
    double validation_snr_db = 0.0;
};

struct TrainReport {
    WeightSet weights;
    std::vector<double> loss_curve;                          // one entry per step
    std::vector<std::pair<std::size_t, double>> ber_curve;   // (step, validation BER)
};

/// Mean over the batch of the summed per-bit cross-entropy, in the
/// stable softplus form. posteriors/messages are row-major batch x k.
double bce_loss(std::span<const double> posteriors, std::span<const std::uint8_t> messages,
                std::size_t batch, std::size_t k);

/// Mean squared difference over batch and positions.
double mse_teacher_loss(std::span<const double> student, std::span<const double> teacher,
                        std::size_t batch, std::size_t k);

/// Loss of one freshly drawn batch (streams step*batch_size + b of
/// cfg.seed) under the given weights; if grad is non-empty (length
/// parameter_count), accumulates the analytic weight gradient into it.
/// Exposed for gradient checks; train() is built on it.
double batch_loss(const TurboCode& code, const TrainConfig& cfg, const WeightSet& weights,
                  std::size_t step, std::span<double> grad);

/// Adam over the unrolled decoder: fresh Bernoulli(1/2) messages each
/// step, encoded, transmitted at train_snr_db, decoded with the tape
/// recorded, loss backpropagated to the 6M (or 6MK) weights.
TrainReport train(const TurboCode& code, const TrainConfig& cfg);

}  // namespace turbodec
