// csifuzz: command-line front end for the CSI fuzzer link simulator.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "csifuzz/harness.hpp"
#include "json.hpp"

using namespace csifuzz;

namespace {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kConfig = 3,
    kIo = 4,
    kDecode = 5,
    kIllConditioned = 6,
};

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> frames;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config, "JSON experiment file");
    cmd->add_option("--seed", opt.seed, "Master seed");
    cmd->add_option("--out-dir", opt.out_dir, "Directory for output files");
    cmd->add_option("--frames", opt.frames, "Frame count override");
}

ExperimentConfig resolve(const CommonOptions& opt, const std::string& experiment) {
    ExperimentConfig cfg = opt.config.empty() ? ExperimentConfig::defaults_for(experiment)
                                              : load_config(opt.config, experiment);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.out_dir) cfg.out_dir = *opt.out_dir;
    if (opt.frames) cfg.frames = *opt.frames;
    cfg.validate();
    return cfg;
}

// "0.35i", "-0.1", or "re,im".
Complex parse_tap(const std::string& text) {
    try {
        if (auto comma = text.find(','); comma != std::string::npos)
            return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
        if (!text.empty() && (text.back() == 'i' || text.back() == 'j'))
            return {0.0, std::stod(text.substr(0, text.size() - 1))};
        return {std::stod(text), 0.0};
    } catch (const std::logic_error&) {
        throw std::invalid_argument("cannot parse tap value \"" + text + "\"");
    }
}

std::string fmt(double v) { return format_double(v); }

int cmd_response(const std::string& c1, const std::string& c2, std::size_t n, const CommonOptions& opt) {
    const FuzzerTaps taps{parse_tap(c1), parse_tap(c2)};
    const FrequencyResponse h = artificial_response(taps, n);
    std::string csv = "bin,re,im,magnitude\n";
    for (std::size_t k = 0; k < h.size(); ++k)
        csv += std::to_string(k) + "," + fmt(h[k].real()) + "," + fmt(h[k].imag()) + "," + fmt(std::abs(h[k])) + "\n";
    const std::filesystem::path out = opt.out_dir.value_or(".");
    write_text(out / "response.csv", csv);
    std::cout << "register " << register_for(taps).hex() << "\n"
              << "power_gain " << fmt(taps.power_gain()) << "\n"
              << csv;
    return kOk;
}

int cmd_csi_demo(const CommonOptions& opt) {
    const ExperimentConfig cfg = resolve(opt, "csi-demo");
    const CsiDemoResult r = run_csi_demo(cfg);
    std::cout << "frames " << cfg.frames << "\n"
              << "taps_register " << register_for(cfg.taps).hex() << "\n"
              << "distortion_on_vs_off " << fmt(r.distortion) << "\n"
              << "max_recovery_error " << fmt(r.max_recovery_error) << "\n"
              << "wrote " << (cfg.out_dir / "csi_off.json").string() << ", csi_on.json, csi_recovered.json\n";
    return kOk;
}

int cmd_parity(const CommonOptions& opt) {
    const ExperimentConfig cfg = resolve(opt, "parity");
    const auto rows = run_parity(cfg);
    std::cout << parity_to_csv(rows);
    return kOk;
}

int cmd_preboost(const CommonOptions& opt) {
    const ExperimentConfig cfg = resolve(opt, "preboost");
    const PreboostReport r = run_preboost(cfg);
    std::cout << "snr_db " << fmt(r.snr_db) << "\n"
              << "best_register " << register_for(r.best).hex() << "\n"
              << "per_off " << fmt(r.confirmation.a.per()) << "\n"
              << "per_best " << fmt(r.confirmation.b.per()) << "\n"
              << "mcnemar_z " << fmt(r.z) << "\n"
              << "significant_95 " << (r.significant ? "yes" : "no") << "\n";
    return kOk;
}

int cmd_scan(const CommonOptions& opt) {
    const ExperimentConfig cfg = resolve(opt, "scan");
    const ScanResult r = run_scan(cfg);
    std::cout << "frames " << r.schedule.size() << "\n"
              << "frames_with_errors " << r.frames_with_errors << "\n";
    for (std::size_t i = 0; i < r.schedule.size(); ++i)
        std::cout << i << " " << register_for(r.schedule[i]).hex() << "\n";
    return r.frames_with_errors == 0 ? kOk : kFailure;
}

int cmd_covert_send(const std::string& msg_hex, const std::string& alphabet_path, bool simulate,
                    const CommonOptions& opt) {
    ExperimentConfig cfg = resolve(opt, "covert");
    if (!alphabet_path.empty()) cfg.alphabet = load_alphabet(alphabet_path);
    const auto msg = from_hex(msg_hex);
    const auto schedule = covert_encode(msg, cfg.alphabet);
    write_text(cfg.out_dir / "covert_schedule.json", schedule_to_json(schedule));
    std::cout << "message_bytes " << msg.size() << "\n"
              << "frames " << schedule.size() << "\n"
              << "wrote " << (cfg.out_dir / "covert_schedule.json").string() << "\n";
    if (simulate) {
        std::optional<double> snr;
        if (!cfg.snr_db.empty()) snr = cfg.snr_db.front();
        const CsiTraceFile trace = simulate_covert_link(schedule, cfg, snr);
        write_trace(trace, cfg.out_dir / "covert_csi.json");
        std::cout << "wrote " << (cfg.out_dir / "covert_csi.json").string() << "\n";
    }
    return kOk;
}

void write_covert_report(const std::filesystem::path& path, const CovertDecodeResult& r, bool ok) {
    nlohmann::json symbols = nlohmann::json::array();
    for (const auto& d : r.decisions)
        symbols.push_back({{"symbol", d.symbol}, {"distance", d.distance}, {"runner_up", d.runner_up}});
    const nlohmann::json j = {{"crc_ok", ok}, {"message_hex", to_hex(r.bytes)}, {"symbols", symbols}};
    write_text(path, j.dump(2) + "\n");
}

int cmd_covert_recv(const std::string& csi_path, const std::string& alphabet_path, const CommonOptions& opt) {
    const CirAlphabet alphabet =
        alphabet_path.empty() ? CirAlphabet::default_alphabet() : load_alphabet(alphabet_path);
    const CsiTraceFile trace = read_trace(csi_path);
    const auto csi = trace.csi_vectors();
    const std::filesystem::path out = opt.out_dir.value_or(".");
    try {
        const CovertDecodeResult r = covert_decode(csi, alphabet, PhyConfig{});
        write_covert_report(out / "covert_report.json", r, true);
        std::cout << "message " << to_hex(r.bytes) << "\n" << "symbols " << r.decisions.size() << "\n";
        return kOk;
    } catch (const CovertDecodeError& e) {
        write_covert_report(out / "covert_report.json", e.best_effort(), false);
        std::cout << "message " << to_hex(e.best_effort().bytes) << "\n";
        throw;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CSI fuzzer OFDM link simulator"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string c1 = "0.35i", c2 = "0.1";
    std::size_t n = PhyConfig::kFftSize;
    auto* response = app.add_subcommand("response", "Artificial frequency response of a taps setting");
    response->add_option("--c1", c1, "First tap: 0.35i, -0.1 or re,im");
    response->add_option("--c2", c2, "Second tap");
    response->add_option("--n", n, "DFT size")->check(CLI::PositiveNumber);
    response->add_option("--out-dir", opt.out_dir, "Directory for response.csv");

    auto* demo = app.add_subcommand("csi-demo", "Fuzzer off/on CSI traces and authorized recovery");
    add_common(demo, opt);
    auto* parity = app.add_subcommand("parity", "PER/BER with the fuzzer off vs on over an SNR grid");
    add_common(parity, opt);
    auto* preboost = app.add_subcommand("preboost", "Taps grid search in a deep-fade environment");
    add_common(preboost, opt);
    auto* scan = app.add_subcommand("scan", "Random per-frame taps with CSI trace");
    add_common(scan, opt);

    auto* covert = app.add_subcommand("covert", "Covert channel over artificial CIR patterns");
    covert->require_subcommand(1);
    std::string msg, alphabet_path, csi_path;
    bool simulate = false;
    auto* send = covert->add_subcommand("send", "Encode a message into a taps schedule");
    send->add_option("--msg", msg, "Message bytes as hex")->required();
    send->add_option("--alphabet", alphabet_path, "Alphabet JSON file");
    send->add_flag("--simulate", simulate, "Also simulate the link and write the receiver CSI trace");
    add_common(send, opt);
    auto* recv = covert->add_subcommand("recv", "Decode a message from a CSI trace");
    recv->add_option("--csi", csi_path, "CSI trace JSON")->required();
    recv->add_option("--alphabet", alphabet_path, "Alphabet JSON file");
    recv->add_option("--out-dir", opt.out_dir, "Directory for covert_report.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*response) return cmd_response(c1, c2, n, opt);
        if (*demo) return cmd_csi_demo(opt);
        if (*parity) return cmd_parity(opt);
        if (*preboost) return cmd_preboost(opt);
        if (*scan) return cmd_scan(opt);
        if (*send) return cmd_covert_send(msg, alphabet_path, simulate, opt);
        if (*recv) return cmd_covert_recv(csi_path, alphabet_path, opt);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const CovertDecodeError& e) {
        std::cerr << "decode error: " << e.what() << "\n";
        return kDecode;
    } catch (const IllConditionedError& e) {
        std::cerr << "ill-conditioned: " << e.what() << "\n";
        return kIllConditioned;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "out of range: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
