#ifndef CSIFUZZ_RECOVERY_HPP
#define CSIFUZZ_RECOVERY_HPP

#include <stdexcept>
#include <vector>

#include "csifuzz/fuzzer.hpp"
#include "csifuzz/phy.hpp"

namespace csifuzz {

inline constexpr double kIllConditionedThreshold = 1e-3;

/// Raised when |H_art(k)| falls below the recovery threshold on used bins.
class IllConditionedError : public std::runtime_error {
public:
    IllConditionedError(std::vector<int> subcarriers, double min_magnitude);

    const std::vector<int>& subcarriers() const { return subcarriers_; }
    double min_magnitude() const { return min_magnitude_; }

private:
    std::vector<int> subcarriers_;
    double min_magnitude_;
};

struct RecoveredCsi {
    ComplexVec values;               // estimate of H_env(k) on used subcarriers
    double min_art_magnitude = 0.0;  // min |H_art(k)| over used subcarriers
    std::uint64_t frame_index = 0;
};

/// Authorized de-fuzzing: values[k] = csi[k] / H_art(k).
RecoveredCsi recover(const CsiVector& csi, const FuzzerTaps& taps, const PhyConfig& cfg,
                     double threshold = kIllConditionedThreshold);

/// Scale-free distortion: RMS over bins of |a[k]/b[k] - 1| where a, b are the
/// fuzzed and clean CSI each normalized to unit mean magnitude.
/// Throws std::invalid_argument on empty or mismatched input or a zero bin.
double unauthorized_distortion(const CsiVector& csi_fuzzed, const CsiVector& csi_clean);
double unauthorized_distortion(std::span<const Complex> fuzzed, std::span<const Complex> clean);

}  // namespace csifuzz

#endif
