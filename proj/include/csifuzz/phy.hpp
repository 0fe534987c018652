#ifndef CSIFUZZ_PHY_HPP
#define CSIFUZZ_PHY_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csifuzz/core.hpp"
#include "csifuzz/fuzzer.hpp"

namespace csifuzz {

enum class Modulation : std::uint8_t { BPSK, QPSK, QAM16 };
enum class Coding : std::uint8_t { Conv12, Uncoded };

std::string to_string(Modulation m);
Modulation modulation_from_string(const std::string& name);
std::size_t bits_per_subcarrier(Modulation m);

/// 802.11a-style 20 MHz numerology: 64-point FFT, 16-sample cyclic prefix,
/// 48 data + 4 pilot subcarriers at +-1..+-26, DC and guards null.
struct PhyConfig {
    static constexpr std::size_t kFftSize = 64;
    static constexpr std::size_t kCpLength = 16;
    static constexpr std::size_t kSymbolLength = kFftSize + kCpLength;
    static constexpr std::size_t kNumUsed = 52;
    static constexpr std::size_t kNumData = 48;
    static constexpr std::size_t kNumPilots = 4;
    static constexpr std::size_t kNumLtf = 2;

    Modulation modulation = Modulation::QPSK;
    Coding coding = Coding::Conv12;

    /// Signed subcarrier indices -26..-1, 1..26 in ascending order.
    static const std::array<int, kNumUsed>& used_subcarriers();
    static const std::array<int, kNumData>& data_subcarriers();
    static const std::array<int, kNumPilots>& pilot_subcarriers();
    /// Known L-LTF value (+-1) for each used subcarrier, in used_subcarriers() order.
    static const std::array<double, kNumUsed>& ltf_sequence();

    /// FFT bin (0..63) for a signed subcarrier index.
    static std::size_t bin(int subcarrier);

    std::size_t coded_bits_per_symbol() const { return kNumData * bits_per_subcarrier(modulation); }
    std::size_t data_bits_per_symbol() const;
    /// OFDM data symbols needed for a payload of n bits (tail and padding included).
    std::size_t symbols_for_payload(std::size_t n_bits) const;
};

/// Time-domain frame: 2 LTF symbols then data symbols, each CP + 64 samples,
/// plus whatever tail the fuzzer FIR and the channel append.
struct OfdmFrame {
    ComplexVec samples;
    Bits payload_bits;
    Modulation modulation = Modulation::QPSK;
    Coding coding = Coding::Conv12;
    std::size_t data_symbols = 0;
    std::uint64_t seed = 0;
};

/// Per-packet channel estimate on the 52 used subcarriers, ordered as
/// PhyConfig::used_subcarriers().
struct CsiVector {
    ComplexVec values;
    std::uint64_t frame_index = 0;
};

// Forward error correction: K=7 convolutional code, generators 133/171 (octal).
inline constexpr unsigned kConvPolyA = 0133;
inline constexpr unsigned kConvPolyB = 0171;
inline constexpr std::size_t kConvTailBits = 6;

/// Appends 6 zero tail bits; output length 2 (n + 6), A/B outputs interleaved.
Bits conv_encode(std::span<const std::uint8_t> bits);

/// Soft-decision Viterbi for the terminated code. llrs[i] > 0 favours a
/// coded 0. Returns the n = llrs.size()/2 - 6 information bits.
/// Throws std::invalid_argument for an odd length or fewer than 12 metrics.
Bits viterbi_decode(std::span<const double> llrs);

/// 802.11a two-step block interleaver applied per n_cbps block.
/// Throws std::invalid_argument when the length is not a multiple of n_cbps.
Bits interleave(std::span<const std::uint8_t> bits, std::size_t n_cbps, std::size_t n_bpsc);
Bits deinterleave(std::span<const std::uint8_t> bits, std::size_t n_cbps, std::size_t n_bpsc);
std::vector<double> deinterleave(std::span<const double> values, std::size_t n_cbps,
                                 std::size_t n_bpsc);
/// Output position of input bit k within a block.
std::size_t interleaver_position(std::size_t k, std::size_t n_cbps, std::size_t n_bpsc);

/// Gray-mapped, unit average power constellation point for n_bpsc bits.
Complex map_symbol(std::span<const std::uint8_t> bits, Modulation m);
ComplexVec map_bits(std::span<const std::uint8_t> bits, Modulation m);

/// Max-log LLRs for one equalized symbol, scaled by `weight` (|CSI|^2).
void demap_symbol(Complex z, double weight, Modulation m, std::vector<double>& out);

/// Transmit chain without the fuzzer: encode, interleave, map, pilots,
/// IFFT scaled so the mean sample power is 1, cyclic prefix, LTF preamble.
ComplexVec modulate_baseband(std::span<const std::uint8_t> bits, const PhyConfig& cfg,
                             std::size_t* data_symbols = nullptr);

/// modulate_baseband followed by the fuzzer FIR over the whole frame.
OfdmFrame modulate_frame(std::span<const std::uint8_t> bits, const PhyConfig& cfg,
                         const FuzzerTaps& taps);

/// Frequency-domain view of OFDM symbol `index` (0, 1 = LTF), with the
/// transmit scaling undone so a flat unit channel returns the mapped symbols.
ComplexVec symbol_spectrum(std::span<const Complex> samples, std::size_t index);

/// Least-squares estimate averaged over both LTF symbols. Assumes ideal sync.
CsiVector estimate_csi(const OfdmFrame& frame_rx, const PhyConfig& cfg);

struct DemodResult {
    Bits bits;
    std::vector<double> llrs;  // deinterleaved, one per coded bit
    std::size_t erased_bins = 0;
};

inline constexpr double kErasureThreshold = 1e-6;

/// Zero-forcing equalization, |CSI|^2-weighted soft demapping, deinterleaving
/// and Viterbi decoding. Bins with |CSI| <= 1e-6 become erasures.
DemodResult demodulate_frame(const OfdmFrame& frame_rx, const CsiVector& csi,
                             const PhyConfig& cfg);

/// Eb/N0 (linear) -> per-sample noise variance for the given config.
/// Accounts for the 52/64 bin occupancy and the code rate.
double noise_variance_for_ebn0(double ebn0_linear, const PhyConfig& cfg);
double noise_variance_for_snr_db(double snr_db);

}  // namespace csifuzz

#endif
