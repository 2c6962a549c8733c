#include "turbodec/channel.hpp"

#include <cmath>

#include "turbodec/errors.hpp"

namespace turbodec {

double snr_to_sigma(double snr_db) { return std::pow(10.0, -snr_db / 20.0); }

void transmit(std::span<const double> symbols, const ChannelSpec& spec, std::mt19937_64& rng,
              std::span<double> out) {
    if (out.size() != symbols.size())
        throw ContractError("transmit: output span size mismatch");
    const double sigma = snr_to_sigma(spec.snr_db);
    std::normal_distribution<double> awgn(0.0, sigma);

    switch (spec.kind) {
        case ChannelKind::awgn:
            for (std::size_t i = 0; i < symbols.size(); ++i) out[i] = symbols[i] + awgn(rng);
            break;
        case ChannelKind::bursty: {
            std::normal_distribution<double> burst(0.0, spec.sigma_b);
            std::uniform_real_distribution<double> coin(0.0, 1.0);
            for (std::size_t i = 0; i < symbols.size(); ++i) {
                double y = symbols[i] + awgn(rng);
                if (coin(rng) < spec.rho) y += burst(rng);
                out[i] = y;
            }
            break;
        }
        case ChannelKind::deterministic_burst:
            for (std::size_t i = 0; i < symbols.size(); ++i) {
                out[i] = symbols[i] + awgn(rng);
                if (i == spec.burst_position) out[i] += spec.burst_amplitude;
            }
            break;
    }
}

std::vector<double> transmit(std::span<const double> symbols, const ChannelSpec& spec,
                             std::mt19937_64& rng) {
    std::vector<double> out(symbols.size());
    transmit(symbols, spec, rng, out);
    return out;
}

void demap(std::span<const double> received, double sigma, std::span<double> llr_out) {
    if (sigma <= 0.0) throw ContractError("demap: sigma must be positive");
    if (llr_out.size() != received.size())
        throw ContractError("demap: output span size mismatch");
    const double scale = 2.0 / (sigma * sigma);
    for (std::size_t i = 0; i < received.size(); ++i) llr_out[i] = scale * received[i];
}

std::vector<double> demap(std::span<const double> received, double sigma) {
    std::vector<double> out(received.size());
    demap(received, sigma, out);
    return out;
}

}  // namespace turbodec
