#include "turbodec/sim.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <ostream>

#include "turbodec/errors.hpp"
#include "turbodec/rng.hpp"

namespace turbodec {

namespace {

using nlohmann::json;

// Stop decisions and tally reductions happen at fixed chunk boundaries,
// independent of thread count.
constexpr std::size_t kChunk = 512;

struct FrameScratch {
    std::vector<std::uint8_t> message, bits;
    CodedFrame coded;
    std::vector<double> symbols, received, llrs, posterior;
    LlrFrame frame;
    TurboTape tape;
};

inline std::uint64_t frame_stream(std::size_t snr_idx, std::size_t frame_idx) {
    return (std::uint64_t(snr_idx) << 32) | std::uint64_t(frame_idx);
}

void generate_frame(const TurboCode& code, const ChannelSpec& ch, double sigma,
                    std::uint64_t seed, std::uint64_t stream, bool zero_message,
                    FrameScratch& fs) {
    auto rng = stream_rng(seed, stream);
    fs.message.resize(code.K);
    if (zero_message)
        std::fill(fs.message.begin(), fs.message.end(), std::uint8_t(0));
    else
        for (auto& b : fs.message) b = std::uint8_t(rng() & 1u);
    encode(code, fs.message, fs.coded);
    serialize(code, fs.coded, fs.symbols);
    fs.received.resize(fs.symbols.size());
    transmit(fs.symbols, ch, rng, fs.received);
    fs.llrs.resize(fs.received.size());
    demap(fs.received, sigma, fs.llrs);
    depuncture(code, fs.llrs, fs.frame);
}

std::uint32_t decode_and_count(const TurboCode& code, const DecodeConfig& cfg, FrameScratch& fs) {
    fs.bits.resize(code.K);
    turbo_decode_into(code, fs.frame, cfg, fs.tape, fs.bits, {});
    std::uint32_t errs = 0;
    for (std::size_t k = 0; k < code.K; ++k) errs += fs.bits[k] != fs.message[k];
    return errs;
}

json channel_json(const ChannelSpec& ch) {
    json j;
    switch (ch.kind) {
        case ChannelKind::awgn: j["kind"] = "awgn"; break;
        case ChannelKind::bursty:
            j["kind"] = "bursty";
            j["sigma_b"] = ch.sigma_b;
            j["rho"] = ch.rho;
            break;
        case ChannelKind::deterministic_burst:
            j["kind"] = "deterministic_burst";
            j["burst_position"] = ch.burst_position;
            j["burst_amplitude"] = ch.burst_amplitude;
            break;
    }
    return j;
}

json code_json(const TurboCode& code) {
    return json{{"K", code.K},
                {"N", code.N},
                {"memory", code.trellis.memory},
                {"punctured", code.puncture == Puncture::rate_half_alternating}};
}

json decoder_json(const DecodeConfig& cfg) {
    return json{{"iterations", cfg.iterations},
                {"algorithm", to_string(cfg.algorithm)},
                {"scheme", to_string(cfg.weights.scheme)}};
}

void fill_ratios(SnrPoint& p, std::size_t k) {
    p.ber = p.frames ? double(p.bit_errors) / (double(p.frames) * double(k)) : 0.0;
    p.bler = p.frames ? double(p.block_errors) / double(p.frames) : 0.0;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

std::string describe_metadata(const TurboCode& code, const DecodeConfig* cfg,
                              const ChannelSpec& channel, std::uint64_t seed) {
    json j;
    j["code"] = code_json(code);
    if (cfg) j["decoder"] = decoder_json(*cfg);
    j["channel"] = channel_json(channel);
    j["seed"] = seed;
    return j.dump();
}

double sign_test_z(std::uint64_t wins, std::uint64_t losses) {
    const double n = double(wins) + double(losses);
    if (n == 0.0) return 0.0;
    return (double(wins) - double(losses)) / std::sqrt(n);
}

SimResult simulate(const TurboCode& code, const DecodeConfig& cfg, const ChannelSpec& channel,
                   std::span<const double> snr_grid_db, const StopRule& stop,
                   std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    SimResult res;
    res.metadata_json = describe_metadata(code, &cfg, channel, seed);

    std::vector<FrameScratch> scratch(omp_get_max_threads());
    std::vector<std::uint32_t> chunk_errs(kChunk);

    for (std::size_t si = 0; si < snr_grid_db.size(); ++si) {
        ChannelSpec ch = channel;
        ch.snr_db = snr_grid_db[si];
        const double sigma = snr_to_sigma(ch.snr_db);

        SnrPoint row;
        row.snr_db = ch.snr_db;
        while (row.frames < stop.max_frames) {
            const std::size_t n = std::min(kChunk, stop.max_frames - row.frames);
#pragma omp parallel for schedule(dynamic, 8)
            for (std::size_t i = 0; i < n; ++i) {
                FrameScratch& fs = scratch[omp_get_thread_num()];
                generate_frame(code, ch, sigma, seed, frame_stream(si, row.frames + i), false,
                               fs);
                chunk_errs[i] = decode_and_count(code, cfg, fs);
            }
            for (std::size_t i = 0; i < n; ++i) {
                row.bit_errors += chunk_errs[i];
                row.block_errors += chunk_errs[i] > 0;
            }
            row.frames += n;
            if (row.block_errors >= stop.min_block_errors) break;
        }
        fill_ratios(row, code.K);
        res.rows.push_back(row);
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

SimResult simulate_reference(const TurboCode& code, const DecodeConfig& cfg,
                             const ChannelSpec& channel, std::span<const double> snr_grid_db,
                             const StopRule& stop, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    SimResult res;
    res.metadata_json = describe_metadata(code, &cfg, channel, seed);
    FrameScratch fs;

    for (std::size_t si = 0; si < snr_grid_db.size(); ++si) {
        ChannelSpec ch = channel;
        ch.snr_db = snr_grid_db[si];
        const double sigma = snr_to_sigma(ch.snr_db);
        SnrPoint row;
        row.snr_db = ch.snr_db;
        while (row.frames < stop.max_frames) {
            generate_frame(code, ch, sigma, seed, frame_stream(si, row.frames), false, fs);
            const std::uint32_t errs = decode_and_count(code, cfg, fs);
            row.bit_errors += errs;
            row.block_errors += errs > 0;
            ++row.frames;
            // same stop boundaries as the parallel path
            if (row.frames % kChunk == 0 && row.block_errors >= stop.min_block_errors) break;
        }
        fill_ratios(row, code.K);
        res.rows.push_back(row);
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

CompareResult compare(const TurboCode& code, std::span<const DecodeConfig> cfgs,
                      std::span<const std::string> labels, const ChannelSpec& channel,
                      std::span<const double> snr_grid_db, std::size_t frames_per_point,
                      std::uint64_t seed) {
    if (cfgs.empty()) throw ContractError("compare: no decoder configs");
    if (!labels.empty() && labels.size() != cfgs.size())
        throw ContractError("compare: labels/configs size mismatch");
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t C = cfgs.size();

    CompareResult res;
    res.snr_grid_db.assign(snr_grid_db.begin(), snr_grid_db.end());
    for (std::size_t c = 0; c < C; ++c)
        res.labels.push_back(labels.empty() ? "config" + std::to_string(c)
                                            : labels[c]);
    res.rows.assign(C, {});
    res.wins.assign(snr_grid_db.size(),
                    std::vector<std::vector<std::uint64_t>>(C, std::vector<std::uint64_t>(C, 0)));

    json meta;
    meta["code"] = code_json(code);
    meta["channel"] = channel_json(channel);
    meta["seed"] = seed;
    meta["frames_per_point"] = frames_per_point;
    json decoders = json::array();
    for (std::size_t c = 0; c < C; ++c) {
        json d = decoder_json(cfgs[c]);
        d["label"] = res.labels[c];
        decoders.push_back(d);
    }
    meta["decoders"] = decoders;
    res.metadata_json = meta.dump();

    std::vector<FrameScratch> scratch(omp_get_max_threads());
    std::vector<std::uint32_t> chunk_errs(kChunk * C);

    for (std::size_t si = 0; si < snr_grid_db.size(); ++si) {
        ChannelSpec ch = channel;
        ch.snr_db = snr_grid_db[si];
        const double sigma = snr_to_sigma(ch.snr_db);

        std::vector<SnrPoint> rows(C);
        for (auto& r : rows) r.snr_db = ch.snr_db;

        std::size_t done = 0;
        while (done < frames_per_point) {
            const std::size_t n = std::min(kChunk, frames_per_point - done);
#pragma omp parallel for schedule(dynamic, 8)
            for (std::size_t i = 0; i < n; ++i) {
                FrameScratch& fs = scratch[omp_get_thread_num()];
                generate_frame(code, ch, sigma, seed, frame_stream(si, done + i), false, fs);
                for (std::size_t c = 0; c < C; ++c)
                    chunk_errs[i * C + c] = decode_and_count(code, cfgs[c], fs);
            }
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t c = 0; c < C; ++c) {
                    const std::uint32_t e = chunk_errs[i * C + c];
                    rows[c].bit_errors += e;
                    rows[c].block_errors += e > 0;
                }
                for (std::size_t a = 0; a < C; ++a)
                    for (std::size_t b = 0; b < C; ++b)
                        if (chunk_errs[i * C + a] < chunk_errs[i * C + b])
                            ++res.wins[si][a][b];
            }
            done += n;
        }
        for (std::size_t c = 0; c < C; ++c) {
            rows[c].frames = done;
            fill_ratios(rows[c], code.K);
            res.rows[c].push_back(rows[c]);
        }
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::vector<LlrStats> analyze_llr(const TurboCode& code, std::span<const DecodeConfig> cfgs,
                                  const ChannelSpec& channel, std::size_t trials,
                                  std::uint64_t seed) {
    if (cfgs.empty()) throw ContractError("analyze_llr: no decoder configs");
    if (trials < 1) throw ContractError("analyze_llr: trials must be >= 1");
    const std::size_t C = cfgs.size();
    const std::size_t K = code.K;
    const double sigma = snr_to_sigma(channel.snr_db);

    std::vector<LlrStats> stats(C);
    std::vector<std::vector<double>> mean(C, std::vector<double>(K, 0.0));
    std::vector<std::vector<double>> m2(C, std::vector<double>(K, 0.0));

    std::vector<FrameScratch> scratch(omp_get_max_threads());
    std::vector<double> chunk_post(kChunk * C * K);

    std::size_t done = 0;
    while (done < trials) {
        const std::size_t n = std::min(kChunk, trials - done);
#pragma omp parallel for schedule(dynamic, 8)
        for (std::size_t i = 0; i < n; ++i) {
            FrameScratch& fs = scratch[omp_get_thread_num()];
            generate_frame(code, channel, sigma, seed, done + i, true, fs);
            fs.posterior.resize(K);
            for (std::size_t c = 0; c < C; ++c) {
                turbo_decode_into(code, fs.frame, cfgs[c], fs.tape, {}, fs.posterior);
                std::copy(fs.posterior.begin(), fs.posterior.end(),
                          chunk_post.begin() + (i * C + c) * K);
            }
        }
        // serial Welford update, trial order
        for (std::size_t i = 0; i < n; ++i) {
            const double cnt = double(done + i + 1);
            for (std::size_t c = 0; c < C; ++c)
                for (std::size_t k = 0; k < K; ++k) {
                    const double x = chunk_post[(i * C + c) * K + k];
                    const double delta = x - mean[c][k];
                    mean[c][k] += delta / cnt;
                    m2[c][k] += delta * (x - mean[c][k]);
                }
        }
        done += n;
    }

    for (std::size_t c = 0; c < C; ++c) {
        stats[c].mean = std::move(mean[c]);
        stats[c].stddev.resize(K);
        for (std::size_t k = 0; k < K; ++k)
            stats[c].stddev[k] = trials > 1 ? std::sqrt(m2[c][k] / double(trials - 1)) : 0.0;
    }
    return stats;
}

void write_sim_csv(std::ostream& os, const SimResult& result) {
    os << "# " << result.metadata_json << '\n';
    os << "snr_db,frames,bit_errors,block_errors,ber,bler\n";
    for (const SnrPoint& p : result.rows)
        os << fmt_double(p.snr_db) << ',' << p.frames << ',' << p.bit_errors << ','
           << p.block_errors << ',' << fmt_double(p.ber) << ',' << fmt_double(p.bler) << '\n';
}

void write_compare_csv(std::ostream& os, const CompareResult& result) {
    os << "# " << result.metadata_json << '\n';
    os << "snr_db,config,frames,bit_errors,block_errors,ber,bler\n";
    for (std::size_t c = 0; c < result.rows.size(); ++c)
        for (const SnrPoint& p : result.rows[c])
            os << fmt_double(p.snr_db) << ',' << result.labels[c] << ',' << p.frames << ','
               << p.bit_errors << ',' << p.block_errors << ',' << fmt_double(p.ber) << ','
               << fmt_double(p.bler) << '\n';
    os << "# paired sign test, one row per ordered pair (a beats b)\n";
    os << "snr_db,config_a,config_b,wins,losses,z\n";
    const std::size_t C = result.labels.size();
    for (std::size_t si = 0; si < result.snr_grid_db.size(); ++si)
        for (std::size_t a = 0; a < C; ++a)
            for (std::size_t b = 0; b < C; ++b) {
                if (a == b) continue;
                const std::uint64_t w = result.wins[si][a][b];
                const std::uint64_t l = result.wins[si][b][a];
                os << fmt_double(result.snr_grid_db[si]) << ',' << result.labels[a] << ','
                   << result.labels[b] << ',' << w << ',' << l << ','
                   << fmt_double(sign_test_z(w, l)) << '\n';
            }
}

void write_llr_stats_csv(std::ostream& os, std::span<const std::string> labels,
                         std::span<const LlrStats> stats, const std::string& metadata_json) {
    os << "# " << metadata_json << '\n';
    os << "config,position,mean,std\n";
    for (std::size_t c = 0; c < stats.size(); ++c)
        for (std::size_t k = 0; k < stats[c].mean.size(); ++k)
            os << labels[c] << ',' << k << ',' << fmt_double(stats[c].mean[k]) << ','
               << fmt_double(stats[c].stddev[k]) << '\n';
}

}  // namespace turbodec
