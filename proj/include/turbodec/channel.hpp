#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace turbodec {

enum class ChannelKind { awgn, bursty, deterministic_burst };

/// AWGN with optional burst noise on top. The bursty variant adds
/// N(0, sigma_b^2) impulses with per-symbol probability rho; the
/// deterministic variant adds a fixed amplitude at one symbol index.
struct ChannelSpec {
    ChannelKind kind = ChannelKind::awgn;
    double snr_db = 0.0;
    double sigma_b = 0.0;   // bursty noise std
    double rho = 0.0;       // bursty occurrence probability
    std::size_t burst_position = 0;
    double burst_amplitude = 0.0;
};

/// Channel LLRs of one received frame, laid out per logical stream.
/// Punctured positions carry LLR 0.
struct LlrFrame {
    std::vector<double> sys, par1, par2;                         // K each
    std::vector<double> tail_sys1, tail_par1, tail_sys2, tail_par2;  // memory each
};

/// Per-symbol noise std for a given SNR: sigma = 10^(-snr_db / 20).
double snr_to_sigma(double snr_db);

/// BPSK symbols through the channel. Symbols are in {-1, +1}
/// (bit 0 -> -1, bit 1 -> +1).
void transmit(std::span<const double> symbols, const ChannelSpec& spec, std::mt19937_64& rng,
              std::span<double> out);
std::vector<double> transmit(std::span<const double> symbols, const ChannelSpec& spec,
                             std::mt19937_64& rng);

/// Matched AWGN demapper: L = 2y / sigma^2. Positive LLR is evidence for
/// bit 1. Applied unchanged (deliberately mismatched) on bursty channels.
/// Throws ContractError if sigma <= 0.
void demap(std::span<const double> received, double sigma, std::span<double> llr_out);
std::vector<double> demap(std::span<const double> received, double sigma);

}  // namespace turbodec
