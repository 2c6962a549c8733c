// Command-line front end: encode, decode, simulate, compare, analyze,
// train. See README.md for formats and examples.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "turbodec/errors.hpp"
#include "turbodec/sim.hpp"
#include "turbodec/train.hpp"
#include "turbodec/weights_io.hpp"

using namespace turbodec;

namespace {

struct CodeOptions {
    std::size_t k = 40;
    std::string trellis = "lte";
    std::string rate = "1/3";
    std::optional<std::uint64_t> f1, f2;

    void attach(CLI::App* cmd) {
        cmd->add_option("--k", k, "message length in bits")->capture_default_str();
        cmd->add_option("--trellis", trellis, "constituent code: lte or 757")
            ->check(CLI::IsMember({"lte", "757"}))
            ->capture_default_str();
        cmd->add_option("--rate", rate, "code rate: 1/3 or 1/2 (punctured)")
            ->check(CLI::IsMember({"1/3", "1/2"}))
            ->capture_default_str();
        cmd->add_option("--f1", f1, "QPP coefficient (defaults to the embedded LTE table)");
        cmd->add_option("--f2", f2, "QPP coefficient");
    }

    TurboCode build() const {
        const Puncture p = rate == "1/2" ? Puncture::rate_half_alternating : Puncture::none;
        const Trellis t = trellis == "757" ? turbo757_trellis() : lte_trellis();
        if (f1.has_value() != f2.has_value())
            throw ConfigError("provide both --f1 and --f2 or neither");
        if (f1)
            return make_code(k, t, *f1, *f2, p);
        const auto [a, b] = lte_qpp_params(k);
        return make_code(k, t, a, b, p);
    }
};

struct ChannelOptions {
    std::string kind = "awgn";
    double sigma_b = 5.0;
    double rho = 0.01;
    std::size_t burst_pos = 0;
    double burst_amp = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--channel", kind, "awgn, bursty, or burst (deterministic)")
            ->check(CLI::IsMember({"awgn", "bursty", "burst"}))
            ->capture_default_str();
        cmd->add_option("--sigma-b", sigma_b, "bursty noise std")->capture_default_str();
        cmd->add_option("--rho", rho, "bursty occurrence probability")->capture_default_str();
        cmd->add_option("--burst-pos", burst_pos, "deterministic burst symbol index");
        cmd->add_option("--burst-amp", burst_amp, "deterministic burst amplitude");
    }

    ChannelSpec build(double snr_db) const {
        ChannelSpec ch;
        ch.snr_db = snr_db;
        if (kind == "bursty") {
            ch.kind = ChannelKind::bursty;
            ch.sigma_b = sigma_b;
            ch.rho = rho;
        } else if (kind == "burst") {
            ch.kind = ChannelKind::deterministic_burst;
            ch.burst_position = burst_pos;
            ch.burst_amplitude = burst_amp;
        }
        return ch;
    }
};

WeightSet resolve_weights(const std::string& spec, int iterations) {
    if (spec == "classical") return WeightSet::classical_set(iterations);
    if (spec == "pretrained") return pretrained_weights();
    if (spec == "ones") return WeightSet::ones_shared(iterations);
    return load_weights(spec);
}

// "label=algorithm:iterations:weights", e.g. "map6=map:6:classical" or
// "mine=maxlog:3:weights.json"
std::pair<std::string, DecodeConfig> parse_decoder_spec(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("decoder spec '" + spec + "' is not label=alg:iters:weights");
    const std::string label = spec.substr(0, eq);
    const std::string rest = spec.substr(eq + 1);
    std::istringstream ss(rest);
    std::string alg, iters, weights;
    if (!std::getline(ss, alg, ':') || !std::getline(ss, iters, ':') ||
        !std::getline(ss, weights))
        throw ConfigError("decoder spec '" + spec + "' is not label=alg:iters:weights");
    DecodeConfig cfg;
    cfg.algorithm = algorithm_from_name(alg);
    cfg.iterations = std::stoi(iters);
    cfg.weights = resolve_weights(weights, cfg.iterations);
    return {label, cfg};
}

std::vector<std::uint8_t> parse_message_line(const std::string& line, std::size_t k) {
    std::string s;
    for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    std::vector<std::uint8_t> bits;
    if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) {
        for (std::size_t i = 2; i < s.size(); ++i) {
            const char c = std::tolower(static_cast<unsigned char>(s[i]));
            int v;
            if (c >= '0' && c <= '9')
                v = c - '0';
            else if (c >= 'a' && c <= 'f')
                v = c - 'a' + 10;
            else
                throw ConfigError("bad hex digit in message line");
            for (int b = 3; b >= 0; --b) bits.push_back((v >> b) & 1);
        }
        if (bits.size() < k) throw ConfigError("hex message shorter than K bits");
        for (std::size_t i = k; i < bits.size(); ++i)
            if (bits[i]) throw ConfigError("hex message has nonzero bits past K");
        bits.resize(k);
    } else {
        for (char c : s) {
            if (c != '0' && c != '1') throw ConfigError("message line is neither hex nor binary");
            bits.push_back(c - '0');
        }
        if (bits.size() != k)
            throw ConfigError("binary message length " + std::to_string(bits.size()) +
                              " != K=" + std::to_string(k));
    }
    return bits;
}

std::istream& open_input(const std::string& path, std::ifstream& file) {
    if (path.empty() || path == "-") return std::cin;
    file.open(path);
    if (!file) throw ConfigError("cannot open input file '" + path + "'");
    return file;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw ConfigError("cannot open output file '" + path + "'");
    return file;
}

int run_encode(const CodeOptions& copt, const std::string& in_path,
               const std::string& out_path) {
    const TurboCode code = copt.build();
    std::ifstream fin;
    std::ofstream fout;
    std::istream& in = open_input(in_path, fin);
    std::ostream& out = open_output(out_path, fout);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto msg = parse_message_line(line, code.K);
        const auto symbols = serialize(code, encode(code, msg));
        for (std::size_t i = 0; i < symbols.size(); ++i)
            out << (i ? " " : "") << (symbols[i] > 0 ? 1 : -1);
        out << '\n';
    }
    return 0;
}

int run_decode(const CodeOptions& copt, const DecodeConfig& cfg, const std::string& in_path,
               const std::string& out_path, bool with_posteriors) {
    const TurboCode code = copt.build();
    std::ifstream fin;
    std::ofstream fout;
    std::istream& in = open_input(in_path, fin);
    std::ostream& out = open_output(out_path, fout);
    std::string line;
    TurboTape tape;
    std::vector<std::uint8_t> bits(code.K);
    std::vector<double> posterior(code.K);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::vector<double> llrs;
        double v;
        while (ss >> v) llrs.push_back(v);
        LlrFrame frame = depuncture(code, llrs);
        turbo_decode_into(code, frame, cfg, tape, bits, posterior);
        for (std::size_t k = 0; k < code.K; ++k) out << int(bits[k]);
        if (with_posteriors) {
            out << ' ';
            for (std::size_t k = 0; k < code.K; ++k)
                out << (k ? " " : "") << posterior[k];
        }
        out << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"turbo codec toolkit: LTE-style turbo codes, log-MAP and max-log-MAP "
                 "decoding with learned extrinsic scaling, Monte-Carlo evaluation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI/TOML file");

    // ---- encode ----
    auto* enc = app.add_subcommand("encode", "encode message bits to BPSK symbols");
    CodeOptions enc_code;
    enc_code.attach(enc);
    std::string enc_in, enc_out;
    enc->add_option("--in", enc_in, "message file, one frame per line (binary or 0x hex); - for stdin");
    enc->add_option("--out", enc_out, "output file; - for stdout");

    // ---- decode ----
    auto* dec = app.add_subcommand("decode", "decode channel LLR frames");
    CodeOptions dec_code;
    dec_code.attach(dec);
    std::string dec_in, dec_out, dec_alg = "maxlog", dec_weights = "pretrained";
    int dec_iters = 3;
    bool dec_post = false;
    dec->add_option("--llr-in", dec_in, "LLR frames, one per line, N whitespace-separated reals");
    dec->add_option("--out", dec_out, "decoded bits output; - for stdout");
    dec->add_option("--alg", dec_alg, "map or maxlog")->capture_default_str();
    dec->add_option("--iters", dec_iters, "decoding iterations")->capture_default_str();
    dec->add_option("--weights", dec_weights,
                    "classical | pretrained | ones | path to weights.json")
        ->capture_default_str();
    dec->add_flag("--posteriors", dec_post, "append final posterior LLRs to each line");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo BER/BLER sweep");
    CodeOptions sim_code;
    sim_code.attach(sim);
    ChannelOptions sim_chan;
    sim_chan.attach(sim);
    std::vector<double> sim_snrs;
    std::string sim_out, sim_alg = "maxlog", sim_weights = "pretrained";
    int sim_iters = 3;
    std::uint64_t sim_seed = 0;
    StopRule sim_stop;
    sim->add_option("--snr", sim_snrs, "SNR grid in dB")->required();
    sim->add_option("--alg", sim_alg, "map or maxlog")->capture_default_str();
    sim->add_option("--iters", sim_iters, "decoding iterations")->capture_default_str();
    sim->add_option("--weights", sim_weights, "classical | pretrained | ones | weights.json")
        ->capture_default_str();
    sim->add_option("--seed", sim_seed, "master seed")->capture_default_str();
    sim->add_option("--min-block-errors", sim_stop.min_block_errors)->capture_default_str();
    sim->add_option("--max-frames", sim_stop.max_frames)->capture_default_str();
    sim->add_option("--out", sim_out, "CSV output; - for stdout");

    // ---- compare ----
    auto* cmp = app.add_subcommand("compare",
                                   "run several decoders on the same noise realizations");
    CodeOptions cmp_code;
    cmp_code.attach(cmp);
    ChannelOptions cmp_chan;
    cmp_chan.attach(cmp);
    std::vector<double> cmp_snrs;
    std::vector<std::string> cmp_specs;
    std::string cmp_out;
    std::size_t cmp_frames = 10000;
    std::uint64_t cmp_seed = 0;
    cmp->add_option("--snr", cmp_snrs, "SNR grid in dB")->required();
    cmp->add_option("--decoder", cmp_specs,
                    "decoder spec label=alg:iters:weights (repeatable)")
        ->required();
    cmp->add_option("--frames", cmp_frames, "frames per SNR point")->capture_default_str();
    cmp->add_option("--seed", cmp_seed)->capture_default_str();
    cmp->add_option("--out", cmp_out, "CSV output; - for stdout");

    // ---- analyze ----
    auto* ana = app.add_subcommand(
        "analyze", "per-position posterior statistics of the all-zero codeword");
    CodeOptions ana_code;
    ana_code.attach(ana);
    ChannelOptions ana_chan;
    ana_chan.attach(ana);
    std::vector<std::string> ana_specs;
    std::string ana_out;
    double ana_snr = 1.0;
    std::size_t ana_trials = 10000;
    std::uint64_t ana_seed = 0;
    ana->add_option("--snr", ana_snr, "SNR in dB")->capture_default_str();
    ana->add_option("--decoder", ana_specs, "decoder spec label=alg:iters:weights (repeatable)")
        ->required();
    ana->add_option("--trials", ana_trials)->capture_default_str();
    ana->add_option("--seed", ana_seed)->capture_default_str();
    ana->add_option("--out", ana_out, "CSV output; - for stdout");

    // ---- train ----
    auto* trn = app.add_subcommand("train", "learn extrinsic scaling weights");
    CodeOptions trn_code;
    trn_code.attach(trn);
    TrainConfig tcfg;
    std::string trn_loss = "bce", trn_scheme = "shared", trn_base = "maxlog";
    std::string trn_out = "weights.json", trn_curves;
    trn->add_option("--loss", trn_loss, "bce or mse")->check(CLI::IsMember({"bce", "mse"}))
        ->capture_default_str();
    trn->add_option("--scheme", trn_scheme, "shared or positional")
        ->check(CLI::IsMember({"shared", "positional"}))
        ->capture_default_str();
    trn->add_option("--base", trn_base, "map or maxlog")->capture_default_str();
    trn->add_option("--lr", tcfg.learning_rate, "Adam learning rate")->capture_default_str();
    trn->add_option("--batch", tcfg.batch_size, "frames per step")->capture_default_str();
    trn->add_option("--snr", tcfg.train_snr_db, "training SNR in dB")->capture_default_str();
    trn->add_option("--steps", tcfg.steps, "optimization steps")->capture_default_str();
    trn->add_option("--iters", tcfg.iterations, "decoder iterations")->capture_default_str();
    trn->add_option("--seed", tcfg.seed)->capture_default_str();
    trn->add_option("--val-every", tcfg.validation_every, "validation period in steps")
        ->capture_default_str();
    trn->add_option("--val-frames", tcfg.validation_frames)->capture_default_str();
    trn->add_option("--val-snr", tcfg.validation_snr_db)->capture_default_str();
    ChannelOptions trn_chan;
    trn_chan.attach(trn);
    trn->add_option("--out", trn_out, "output weight file")->capture_default_str();
    trn->add_option("--curves", trn_curves, "loss/BER curve CSV output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*enc) return run_encode(enc_code, enc_in, enc_out);

        if (*dec) {
            DecodeConfig cfg;
            cfg.algorithm = algorithm_from_name(dec_alg);
            cfg.iterations = dec_iters;
            cfg.weights = resolve_weights(dec_weights, dec_iters);
            return run_decode(dec_code, cfg, dec_in, dec_out, dec_post);
        }

        if (*sim) {
            const TurboCode code = sim_code.build();
            DecodeConfig cfg;
            cfg.algorithm = algorithm_from_name(sim_alg);
            cfg.iterations = sim_iters;
            cfg.weights = resolve_weights(sim_weights, sim_iters);
            const SimResult r =
                simulate(code, cfg, sim_chan.build(0.0), sim_snrs, sim_stop, sim_seed);
            std::ofstream fout;
            write_sim_csv(open_output(sim_out, fout), r);
            std::cerr << "simulate: " << r.wall_seconds << " s\n";
            return 0;
        }

        if (*cmp) {
            const TurboCode code = cmp_code.build();
            std::vector<DecodeConfig> cfgs;
            std::vector<std::string> labels;
            for (const auto& spec : cmp_specs) {
                auto [label, cfg] = parse_decoder_spec(spec);
                labels.push_back(label);
                cfgs.push_back(std::move(cfg));
            }
            const CompareResult r =
                compare(code, cfgs, labels, cmp_chan.build(0.0), cmp_snrs, cmp_frames, cmp_seed);
            std::ofstream fout;
            write_compare_csv(open_output(cmp_out, fout), r);
            std::cerr << "compare: " << r.wall_seconds << " s\n";
            return 0;
        }

        if (*ana) {
            const TurboCode code = ana_code.build();
            std::vector<DecodeConfig> cfgs;
            std::vector<std::string> labels;
            for (const auto& spec : ana_specs) {
                auto [label, cfg] = parse_decoder_spec(spec);
                labels.push_back(label);
                cfgs.push_back(std::move(cfg));
            }
            const ChannelSpec ch = ana_chan.build(ana_snr);
            const auto stats = analyze_llr(code, cfgs, ch, ana_trials, ana_seed);
            std::ofstream fout;
            write_llr_stats_csv(open_output(ana_out, fout), labels, stats,
                                describe_metadata(code, nullptr, ch, ana_seed));
            return 0;
        }

        if (*trn) {
            const TurboCode code = trn_code.build();
            tcfg.loss = trn_loss == "mse" ? LossKind::mse_to_teacher : LossKind::bce;
            tcfg.scheme = scheme_from_name(trn_scheme);
            tcfg.base_algorithm = algorithm_from_name(trn_base);
            if (trn_chan.kind == "bursty") {
                tcfg.channel_kind = ChannelKind::bursty;
                tcfg.sigma_b = trn_chan.sigma_b;
                tcfg.rho = trn_chan.rho;
            }
            const TrainReport rep = train(code, tcfg);
            save_weights(trn_out, rep.weights);
            std::cerr << "train: wrote " << trn_out << ", final loss "
                      << rep.loss_curve.back() << '\n';
            if (!trn_curves.empty()) {
                std::ofstream fout;
                std::ostream& os = open_output(trn_curves, fout);
                os << "step,loss,val_ber\n";
                std::size_t vi = 0;
                for (std::size_t s = 0; s < rep.loss_curve.size(); ++s) {
                    os << s << ',' << rep.loss_curve[s] << ',';
                    if (vi < rep.ber_curve.size() && rep.ber_curve[vi].first == s)
                        os << rep.ber_curve[vi++].second;
                    os << '\n';
                }
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const ContractError& e) {
        std::cerr << "contract error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
