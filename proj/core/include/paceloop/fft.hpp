#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace paceloop {

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& data);

// One-sided power spectrum |X[k]|^2 for k = 0..fft_size/2 of a real frame,
// zero-padded to fft_size (power of two, >= frame length).
std::vector<double> power_spectrum(std::span<const double> frame,
                                   std::size_t fft_size);

}  // namespace paceloop
