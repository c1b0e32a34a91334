#pragma once

#include <complex>
#include <vector>

namespace vckit {

// Smallest power of two >= n.
int next_pow2(int n);

// In-place iterative radix-2 FFT. Size must be a power of two.
// inverse=true applies the conjugate transform without 1/N scaling.
void fft_inplace(std::vector<std::complex<double>> &a, bool inverse = false);

// Forward FFT of a real signal zero-padded to `n` (power of two).
std::vector<std::complex<double>> fft_real(const std::vector<double> &x, int n);

// Onesided magnitude spectrum (n/2+1 bins) of a real signal padded to n.
std::vector<double> magnitude_spectrum(const std::vector<double> &x, int n);

} // namespace vckit
