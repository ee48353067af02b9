#include "paceloop/fft.hpp"

#include <cmath>

#include "paceloop/error.hpp"

namespace paceloop {

void fft_radix2(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        fail("invalid-fft-size", "size " + std::to_string(n) + " is not a power of two");
    }

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> step(std::cos(angle), std::sin(angle));
        for (std::size_t start = 0; start < n; start += len) {
            std::complex<double> twiddle(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> even = data[start + k];
                const std::complex<double> odd = data[start + k + len / 2] * twiddle;
                data[start + k] = even + odd;
                data[start + k + len / 2] = even - odd;
                twiddle *= step;
            }
        }
    }
}

std::vector<double> power_spectrum(std::span<const double> frame,
                                   std::size_t fft_size) {
    std::vector<std::complex<double>> buffer(fft_size, {0.0, 0.0});
    const std::size_t copy = std::min(frame.size(), fft_size);
    for (std::size_t i = 0; i < copy; ++i) {
        buffer[i] = {frame[i], 0.0};
    }
    fft_radix2(buffer);

    std::vector<double> power(fft_size / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) {
        power[k] = std::norm(buffer[k]);
    }
    return power;
}

}  // namespace paceloop
