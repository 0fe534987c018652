#ifndef CSIFUZZ_CORE_HPP
#define CSIFUZZ_CORE_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csifuzz {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;
using Bits = std::vector<std::uint8_t>;

inline constexpr double kPi = 3.14159265358979323846;

// Error categories. The CLI maps each one to its own exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Forward DFT of x zero-padded to n bins, X[k] = sum x[m] exp(-2 pi i k m / n).
/// Unnormalized. Uses radix-2 when n is a power of two, a direct sum otherwise.
ComplexVec dft(std::span<const Complex> x, std::size_t n);

/// Inverse DFT with the 1/n factor.
ComplexVec idft(std::span<const Complex> spectrum);

bool all_finite(std::span<const Complex> x);

enum class TapAxis : std::uint8_t { Real = 0, Imag = 1 };

/// Q1.15 tap code restricted to [-0.5, 0.5), so code lies in [-16384, 16383].
struct FixedPointTap {
    TapAxis axis = TapAxis::Real;
    std::int16_t code = 0;

    static constexpr int kFracBits = 15;
    static constexpr std::int16_t kMinCode = -16384;
    static constexpr std::int16_t kMaxCode = 16383;

    double magnitude() const { return static_cast<double>(code) / (1 << kFracBits); }
    Complex decode() const;

    friend bool operator==(const FixedPointTap&, const FixedPointTap&) = default;
};

/// Round-to-nearest (ties away from zero) Q1.15 quantization of an
/// axis-aligned tap. Throws std::invalid_argument when the off-axis part is
/// nonzero and std::out_of_range when the on-axis part leaves [-0.5, 0.5).
FixedPointTap quantize_tap(Complex value, TapAxis axis);

// Seeded randomness. Every stochastic API takes an explicit seed; streams for
// Monte Carlo cells are derived with derive_seed so results do not depend on
// evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t sub);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi);
    double gaussian(double stddev);
    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    Complex complex_gaussian(double variance);
    std::uint8_t bit();
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

Bits random_bits(std::size_t n, std::uint64_t seed);

}  // namespace csifuzz

#endif
