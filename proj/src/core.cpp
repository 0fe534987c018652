#include "csifuzz/core.hpp"

#include <bit>
#include <cmath>

namespace csifuzz {

namespace {

// Twiddles from the exact angle, not by repeated multiplication.
ComplexVec twiddles(std::size_t n, bool inverse) {
    const double sign = inverse ? 1.0 : -1.0;
    ComplexVec w(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double angle = sign * 2.0 * kPi * double(j) / double(n);
        w[j] = {std::cos(angle), std::sin(angle)};
    }
    return w;
}

void fft_radix2(ComplexVec& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    static const ComplexVec fwd64 = twiddles(64, false);
    static const ComplexVec inv64 = twiddles(64, true);
    ComplexVec other;
    if (n != 64) other = twiddles(n, inverse);
    const ComplexVec& twiddle = n != 64 ? other : (inverse ? inv64 : fwd64);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t k = 0; k < half; ++k) {
            const Complex w = twiddle[k * stride];
            for (std::size_t i = 0; i < n; i += len) {
                const Complex u = a[i + k];
                const Complex v = a[i + k + half] * w;
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

ComplexVec dft_direct(const ComplexVec& x, bool inverse) {
    const std::size_t n = x.size();
    const double sign = inverse ? 1.0 : -1.0;
    ComplexVec out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{};
        for (std::size_t m = 0; m < n; ++m) {
            const double angle = sign * 2.0 * kPi * double((k * m) % n) / double(n);
            acc += x[m] * Complex{std::cos(angle), std::sin(angle)};
        }
        out[k] = acc;
    }
    return out;
}

ComplexVec transform(ComplexVec a, bool inverse) {
    if (std::has_single_bit(a.size())) {
        fft_radix2(a, inverse);
        return a;
    }
    return dft_direct(a, inverse);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

ComplexVec dft(std::span<const Complex> x, std::size_t n) {
    if (n == 0) throw std::invalid_argument("dft: size must be positive");
    if (n < x.size()) throw std::invalid_argument("dft: size smaller than input length");
    ComplexVec a(n);
    std::copy(x.begin(), x.end(), a.begin());
    return transform(std::move(a), false);
}

ComplexVec idft(std::span<const Complex> spectrum) {
    if (spectrum.empty()) throw std::invalid_argument("idft: empty input");
    ComplexVec a = transform(ComplexVec(spectrum.begin(), spectrum.end()), true);
    const double scale = 1.0 / double(a.size());
    for (auto& v : a) v *= scale;
    return a;
}

bool all_finite(std::span<const Complex> x) {
    for (const auto& v : x) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

Complex FixedPointTap::decode() const {
    return axis == TapAxis::Real ? Complex{magnitude(), 0.0} : Complex{0.0, magnitude()};
}

FixedPointTap quantize_tap(Complex value, TapAxis axis) {
    const double on = axis == TapAxis::Real ? value.real() : value.imag();
    const double off = axis == TapAxis::Real ? value.imag() : value.real();
    if (off != 0.0) throw std::invalid_argument("quantize_tap: off-axis component is nonzero");
    if (!std::isfinite(on) || on < -0.5 || on >= 0.5)
        throw std::out_of_range("quantize_tap: component outside [-0.5, 0.5)");
    // std::lround rounds halfway cases away from zero.
    long code = std::lround(on * double(1 << FixedPointTap::kFracBits));
    if (code > FixedPointTap::kMaxCode) code = FixedPointTap::kMaxCode;
    return {axis, static_cast<std::int16_t>(code)};
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t sub) {
    return derive_seed(derive_seed(master, stream), sub);
}

// Uniform and Gaussian draws are built directly on the 64-bit engine so the
// sample streams are identical across standard library implementations.
double Rng::uniform(double lo, double hi) {
    const double u = double(engine_() >> 11) * 0x1.0p-53;  // [0, 1)
    return lo + (hi - lo) * u;
}

double Rng::gaussian(double stddev) {
    double u1 = 0.0;
    do {
        u1 = uniform(0.0, 1.0);
    } while (u1 <= 0.0);
    const double u2 = uniform(0.0, 1.0);
    return stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Complex Rng::complex_gaussian(double variance) {
    // Both Box-Muller outputs: independent real and imaginary parts.
    double u1 = 0.0;
    do {
        u1 = uniform(0.0, 1.0);
    } while (u1 <= 0.0);
    const double u2 = uniform(0.0, 1.0);
    const double r = std::sqrt(-variance * std::log(u1));
    return std::polar(r, 2.0 * kPi * u2);
}

std::uint8_t Rng::bit() { return static_cast<std::uint8_t>(engine_() >> 63); }

Bits random_bits(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Bits bits(n);
    for (auto& b : bits) b = rng.bit();
    return bits;
}

}  // namespace csifuzz
