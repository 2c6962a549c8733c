#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "turbodec/channel.hpp"
#include "turbodec/turbo_code.hpp"
#include "turbodec/turbo_decoder.hpp"

namespace turbodec {

/// A run over one SNR point ends as soon as either bound is hit,
/// checked at fixed 512-frame boundaries.
struct StopRule {
    std::size_t min_block_errors = 100;
    std::size_t max_frames = 200000;
};

struct SnrPoint {
    double snr_db = 0.0;
    std::size_t frames = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t block_errors = 0;
    double ber = 0.0;
    double bler = 0.0;
};

struct SimResult {
    std::vector<SnrPoint> rows;
    std::string metadata_json;
    double wall_seconds = 0.0;  // not written to output files
};

/// Monte-Carlo BER/BLER sweep. Every frame draws from its own RNG
/// stream (seed, snr-index, frame-index), so tallies are identical for
/// any thread count. OpenMP-parallel over frames.
SimResult simulate(const TurboCode& code, const DecodeConfig& cfg, const ChannelSpec& channel,
                   std::span<const double> snr_grid_db, const StopRule& stop,
                   std::uint64_t seed);

/// Plain serial loop with the same frame streams and stop rule; kept as
/// the reference the parallel path is tested against.
SimResult simulate_reference(const TurboCode& code, const DecodeConfig& cfg,
                             const ChannelSpec& channel, std::span<const double> snr_grid_db,
                             const StopRule& stop, std::uint64_t seed);

struct CompareResult {
    std::vector<double> snr_grid_db;
    std::vector<std::string> labels;
    std::vector<std::vector<SnrPoint>> rows;  // [config][snr]
    // wins[snr][i][j]: frames where config i made strictly fewer bit
    // errors than config j (common random numbers, so pairs are matched).
    std::vector<std::vector<std::vector<std::uint64_t>>> wins;
    std::string metadata_json;
    double wall_seconds = 0.0;
};

/// Runs every config on the same noise realizations, frame-paired.
CompareResult compare(const TurboCode& code, std::span<const DecodeConfig> cfgs,
                      std::span<const std::string> labels, const ChannelSpec& channel,
                      std::span<const double> snr_grid_db, std::size_t frames_per_point,
                      std::uint64_t seed);

/// One-sided paired sign-test statistic: (wins - losses) / sqrt(n).
/// Exceeding 2.3263 rejects "no better" at 99% confidence.
double sign_test_z(std::uint64_t wins, std::uint64_t losses);

/// Per-position mean and standard deviation of the final posterior over
/// repeated transmissions of the all-zero codeword.
struct LlrStats {
    std::vector<double> mean, stddev;  // K each
};

std::vector<LlrStats> analyze_llr(const TurboCode& code, std::span<const DecodeConfig> cfgs,
                                  const ChannelSpec& channel, std::size_t trials,
                                  std::uint64_t seed);

// Plot-ready CSV with a JSON metadata header line. Byte-identical for
// identical inputs.
void write_sim_csv(std::ostream& os, const SimResult& result);
void write_compare_csv(std::ostream& os, const CompareResult& result);
void write_llr_stats_csv(std::ostream& os, std::span<const std::string> labels,
                         std::span<const LlrStats> stats, const std::string& metadata_json);

std::string describe_metadata(const TurboCode& code, const DecodeConfig* cfg,
                              const ChannelSpec& channel, std::uint64_t seed);

}  // namespace turbodec
