#include "vckit/fft.hpp"

#include "vckit/errors.hpp"

#include <cmath>
#include <numbers>

namespace vckit {

int next_pow2(int n) {
    int p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

void fft_inplace(std::vector<std::complex<double>> &a, bool inverse) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw ParamError("fft size must be a nonzero power of two, got " + std::to_string(n));

    // bit-reversal permutation
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }

    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<std::complex<double>> fft_real(const std::vector<double> &x, int n) {
    std::vector<std::complex<double>> a(static_cast<size_t>(n));
    const size_t m = std::min(x.size(), static_cast<size_t>(n));
    for (size_t i = 0; i < m; ++i)
        a[i] = x[i];
    fft_inplace(a, false);
    return a;
}

std::vector<double> magnitude_spectrum(const std::vector<double> &x, int n) {
    auto a = fft_real(x, n);
    std::vector<double> mag(static_cast<size_t>(n) / 2 + 1);
    for (size_t k = 0; k < mag.size(); ++k)
        mag[k] = std::abs(a[k]);
    return mag;
}

} // namespace vckit
