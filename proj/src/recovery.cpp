#include "csifuzz/recovery.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "csifuzz/channel.hpp"

namespace csifuzz {

namespace {

std::string describe(const std::vector<int>& bins, double min_mag) {
    std::string s = "recover: |H_art| below threshold on subcarriers";
    for (int k : bins) s += " " + std::to_string(k);
    s += " (min " + std::to_string(min_mag) + ")";
    return s;
}

}  // namespace

IllConditionedError::IllConditionedError(std::vector<int> subcarriers, double min_magnitude)
    : std::runtime_error(describe(subcarriers, min_magnitude)),
      subcarriers_(std::move(subcarriers)),
      min_magnitude_(min_magnitude) {}

RecoveredCsi recover(const CsiVector& csi, const FuzzerTaps& taps, const PhyConfig&, double threshold) {
    if (csi.values.size() != PhyConfig::kNumUsed)
        throw std::invalid_argument("recover: CSI must cover the 52 used subcarriers");
    const ComplexVec art = used_bins(artificial_response(taps, PhyConfig::kFftSize));
    const auto& used = PhyConfig::used_subcarriers();

    RecoveredCsi out;
    out.frame_index = csi.frame_index;
    out.min_art_magnitude = std::numeric_limits<double>::infinity();
    std::vector<int> bad;
    for (std::size_t i = 0; i < art.size(); ++i) {
        const double mag = std::abs(art[i]);
        out.min_art_magnitude = std::min(out.min_art_magnitude, mag);
        if (mag < threshold) bad.push_back(used[i]);
    }
    if (!bad.empty()) throw IllConditionedError(std::move(bad), out.min_art_magnitude);

    out.values.resize(art.size());
    for (std::size_t i = 0; i < art.size(); ++i) out.values[i] = csi.values[i] / art[i];
    return out;
}

double unauthorized_distortion(std::span<const Complex> fuzzed, std::span<const Complex> clean) {
    if (fuzzed.empty() || clean.empty()) throw std::invalid_argument("distortion: no bins");
    if (fuzzed.size() != clean.size())
        throw std::invalid_argument("distortion: CSI vectors have different support");
    double mean_f = 0.0;
    double mean_c = 0.0;
    for (std::size_t i = 0; i < fuzzed.size(); ++i) {
        mean_f += std::abs(fuzzed[i]);
        mean_c += std::abs(clean[i]);
    }
    mean_f /= double(fuzzed.size());
    mean_c /= double(clean.size());
    if (mean_f == 0.0 || mean_c == 0.0) throw std::invalid_argument("distortion: all-zero CSI");

    double acc = 0.0;
    for (std::size_t i = 0; i < fuzzed.size(); ++i) {
        if (clean[i] == Complex{}) throw std::invalid_argument("distortion: zero bin in clean CSI");
        const Complex ratio = (fuzzed[i] / mean_f) / (clean[i] / mean_c);
        acc += std::norm(ratio - 1.0);
    }
    return std::sqrt(acc / double(fuzzed.size()));
}

double unauthorized_distortion(const CsiVector& csi_fuzzed, const CsiVector& csi_clean) {
    return unauthorized_distortion(csi_fuzzed.values, csi_clean.values);
}

}  // namespace csifuzz
