#ifndef CSIFUZZ_COVERT_HPP
#define CSIFUZZ_COVERT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "csifuzz/fuzzer.hpp"
#include "csifuzz/phy.hpp"

namespace csifuzz {

/// Pattern alphabet for the CIR covert channel. Pattern i encodes symbol i;
/// every pilot_period-th frame (starting at frame 0) is an identity pilot.
struct CirAlphabet {
    std::vector<FuzzerTaps> patterns;
    std::size_t pilot_period = 8;
    double d_min = 0.1;

    /// {(0.35i, 0.1), (-0.35i, 0.1), (0.35, 0.1i), (-0.35, 0.1i)}.
    static CirAlphabet default_alphabet();

    /// Throws ConfigError when fewer than 2 patterns, pilot_period < 2, or two
    /// patterns are closer than d_min.
    void validate() const;

    std::size_t size() const { return patterns.size(); }
    /// Base-M digits carried per byte.
    std::size_t digits_per_byte() const;
};

/// RMS over used subcarriers of |H_a(k) - H_b(k)|.
double response_distance(const FuzzerTaps& a, const FuzzerTaps& b);
double min_pairwise_distance(const CirAlphabet& alphabet);

/// CRC-16/CCITT-FALSE (poly 0x1021, init 0xffff).
std::uint16_t crc16_ccitt(std::span<const std::uint8_t> data);

/// 2-byte big-endian length, payload, 2-byte CRC over both.
std::vector<std::uint8_t> frame_message(std::span<const std::uint8_t> msg);

/// Big-endian base-M digits of each byte.
std::vector<std::size_t> bytes_to_symbols(std::span<const std::uint8_t> bytes,
                                          const CirAlphabet& alphabet);

struct ScheduledFrame {
    FuzzerTaps taps;
    bool pilot = false;
    std::size_t symbol = 0;  // meaningful for data frames only
};

/// Message -> framed bytes -> symbols -> per-frame taps, pilots interleaved.
std::vector<ScheduledFrame> covert_encode(std::span<const std::uint8_t> msg,
                                          const CirAlphabet& alphabet);

struct SymbolDecision {
    std::size_t symbol = 0;
    double distance = 0.0;         // to the chosen pattern
    double runner_up = 0.0;        // to the second-best pattern
};

struct CovertDecodeResult {
    std::vector<std::uint8_t> bytes;          // message payload
    std::vector<SymbolDecision> decisions;    // one per data frame
    std::vector<std::size_t> symbols() const;
};

class CovertDecodeError : public std::runtime_error {
public:
    CovertDecodeError(const std::string& what, CovertDecodeResult best_effort);
    const CovertDecodeResult& best_effort() const { return best_effort_; }

private:
    CovertDecodeResult best_effort_;
};

/// Minimum-distance decision of a single data frame against the patterns,
/// given the ratio q(k) = CSI_data(k) / CSI_pilot(k). Lowest index wins ties.
SymbolDecision classify_ratio(std::span<const Complex> ratio, const CirAlphabet& alphabet);

/// Classifies every data frame (pilot-ratio against the most recent pilot)
/// without parsing the framing.
std::vector<SymbolDecision> covert_classify(std::span<const CsiVector> csi_stream,
                                            const CirAlphabet& alphabet);

/// Full decode. Throws CovertDecodeError (carrying best-effort bytes and the
/// per-symbol decisions) when the framing or CRC does not check out.
CovertDecodeResult covert_decode(std::span<const CsiVector> csi_stream,
                                 const CirAlphabet& alphabet, const PhyConfig& cfg);

/// Number of positions where decoded and reference symbols differ; missing
/// symbols count as errors.
std::size_t symbol_errors(std::span<const std::size_t> decoded,
                          std::span<const std::size_t> reference);

}  // namespace csifuzz

#endif
