#ifndef CSIFUZZ_HARNESS_HPP
#define CSIFUZZ_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "csifuzz/channel.hpp"
#include "csifuzz/covert.hpp"
#include "csifuzz/montecarlo.hpp"
#include "csifuzz/fuzzer.hpp"
#include "csifuzz/phy.hpp"
#include "csifuzz/recovery.hpp"

namespace csifuzz {

/// Everything one experiment needs. Loaded from JSON; unspecified fields keep
/// the per-experiment defaults below.
struct ExperimentConfig {
    std::string experiment = "custom";
    PhyConfig phy;
    ChannelModel channel;
    FuzzerTaps taps{Complex{0.0, 0.35}, Complex{0.1, 0.0}};
    std::vector<double> snr_db;
    std::size_t frames = 1;
    std::size_t payload_bytes = 100;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = ".";

    // preboost
    int fade_subcarrier = 10;
    std::vector<double> tap_grid{-0.4, -0.2, 0.2, 0.4};
    std::size_t screen_frames = 2000;

    // scan
    TapRange tap_range;

    // covert
    CirAlphabet alphabet = CirAlphabet::default_alphabet();

    /// Throws ConfigError for an invalid sub-config or frames == 0.
    void validate() const;

    static ExperimentConfig defaults_for(const std::string& experiment);
};

/// Parses a JSON experiment file; keys absent from the file keep the defaults
/// of the named experiment. Throws ConfigError / IoError.
ExperimentConfig load_config(const std::filesystem::path& path, const std::string& experiment);
ExperimentConfig parse_config(const std::string& json_text, const std::string& experiment);

CirAlphabet load_alphabet(const std::filesystem::path& path);
CirAlphabet parse_alphabet(const std::string& json_text);
std::string alphabet_to_json(const CirAlphabet& alphabet);

// ---------------------------------------------------------------------------
// CSI trace files

struct CsiTraceRecord {
    std::uint64_t frame = 0;
    FuzzerRegister reg;
    ComplexVec csi;

    friend bool operator==(const CsiTraceRecord&, const CsiTraceRecord&) = default;
};

struct CsiTraceFile {
    static constexpr int kVersion = 1;

    int version = kVersion;
    std::size_t fft_size = PhyConfig::kFftSize;
    std::vector<int> subcarriers;
    std::string experiment;
    std::vector<CsiTraceRecord> records;

    /// Throws ConfigError on a version or record-length mismatch.
    void validate() const;
    std::vector<CsiVector> csi_vectors() const;

    friend bool operator==(const CsiTraceFile&, const CsiTraceFile&) = default;
};

CsiTraceFile make_trace(const std::string& experiment);
std::string trace_to_json(const CsiTraceFile& trace);
CsiTraceFile trace_from_json(const std::string& text);
void write_trace(const CsiTraceFile& trace, const std::filesystem::path& path);
CsiTraceFile read_trace(const std::filesystem::path& path);

// Frames serialized for inspection: samples as [re, im] pairs.
std::string frame_to_json(const OfdmFrame& frame);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

// ---------------------------------------------------------------------------
// Experiments. Each writes its outputs under cfg.out_dir and returns them.

struct CsiDemoResult {
    CsiTraceFile off;
    CsiTraceFile on;
    CsiTraceFile recovered;
    double distortion = 0.0;         // mean distortion score, on vs off
    double max_recovery_error = 0.0; // max |recovered - off| over all bins
};
CsiDemoResult run_csi_demo(const ExperimentConfig& cfg);

struct ParityRow {
    double snr_db = 0.0;
    double per_off = 0.0;
    double per_on = 0.0;
    double ber_off = 0.0;
    double ber_on = 0.0;
    std::uint64_t frames = 0;
};
std::vector<ParityRow> run_parity(const ExperimentConfig& cfg);
std::string parity_to_csv(const std::vector<ParityRow>& rows);
std::vector<ParityRow> parity_from_csv(const std::string& csv);

struct PreboostRow {
    FuzzerTaps taps;
    double power_gain_db = 0.0;
    double per = 0.0;
    std::uint64_t frames = 0;
};
struct PreboostReport {
    double snr_db = 0.0;
    std::vector<PreboostRow> grid;   // screening pass, identity taps first
    FuzzerTaps best;
    PairedStats confirmation;         // a = taps off, b = best, fresh seed
    double z = 0.0;                   // one-sided McNemar statistic
    bool significant = false;         // z > 1.645
};
PreboostReport run_preboost(const ExperimentConfig& cfg);
std::string preboost_to_csv(const PreboostReport& report);

struct ScanResult {
    std::vector<FuzzerTaps> schedule;
    CsiTraceFile trace;
    std::size_t frames_with_errors = 0;
    std::vector<double> consecutive_distortion;  // between frame i and i+1
};
ScanResult run_scan(const ExperimentConfig& cfg);

std::string schedule_to_json(const std::vector<ScheduledFrame>& schedule);
std::vector<ScheduledFrame> schedule_from_json(const std::string& text);

/// Runs a covert schedule over cfg.channel (drifting as a random walk) and
/// returns the receiver's CSI trace. Without an SNR the channel's own noise
/// variance is used.
CsiTraceFile simulate_covert_link(const std::vector<ScheduledFrame>& schedule,
                                  const ExperimentConfig& cfg, std::optional<double> snr_db);

/// Symbol error rate of the covert channel for a random message stream of
/// at least `symbols` data symbols.
struct CovertSerResult {
    std::size_t symbols = 0;
    std::size_t errors = 0;
    double ser() const { return symbols ? double(errors) / double(symbols) : 0.0; }
};
CovertSerResult measure_covert_ser(const ExperimentConfig& cfg, std::optional<double> snr_db,
                                   std::size_t symbols);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(const std::string& text);

}  // namespace csifuzz

#endif
