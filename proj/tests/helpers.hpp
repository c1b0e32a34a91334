#pragma once

#include "vckit/audio.hpp"
#include "vckit/fft.hpp"
#include "vckit/rng.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace testutil {

inline vckit::AudioBuffer sine(double freq, double dur_s, int sr, double amp = 0.5) {
    vckit::AudioBuffer a;
    a.sample_rate = sr;
    const size_t n = static_cast<size_t>(dur_s * sr);
    a.samples.resize(n);
    for (size_t i = 0; i < n; ++i)
        a.samples[i] = amp * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / sr);
    return a;
}

// impulse train lightly smoothed so peak picking and pitch tracking have
// clean periodic structure
inline vckit::AudioBuffer pulse_train(double f0, double dur_s, int sr, double amp = 0.7) {
    vckit::AudioBuffer a;
    a.sample_rate = sr;
    const size_t n = static_cast<size_t>(dur_s * sr);
    a.samples.assign(n, 0.0);
    const double period = sr / f0;
    const double kernel[5] = {0.25, 0.5, 1.0, 0.5, 0.25};
    for (double pos = period / 2; pos < static_cast<double>(n); pos += period) {
        const long long center = std::llround(pos);
        for (int k = -2; k <= 2; ++k) {
            const long long i = center + k;
            if (i >= 0 && i < static_cast<long long>(n))
                a.samples[static_cast<size_t>(i)] += amp * kernel[k + 2];
        }
    }
    return a;
}

inline vckit::AudioBuffer white_noise(double dur_s, int sr, uint64_t seed, double amp = 0.3) {
    vckit::AudioBuffer a;
    a.sample_rate = sr;
    const size_t n = static_cast<size_t>(dur_s * sr);
    a.samples.resize(n);
    vckit::Pcg32 rng(seed);
    for (auto &v : a.samples)
        v = amp * rng.uniform(-1.0, 1.0);
    return a;
}

// slow direct DFT, independent of the library FFT
inline std::vector<std::complex<double>> naive_dft(const std::vector<double> &x) {
    const size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(j) / static_cast<double>(n);
            acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

// frequency of the largest magnitude bin over a Hann-windowed prefix
inline double dominant_freq(const vckit::AudioBuffer &a, int fft_size = 16384) {
    const int n = std::min<int>(fft_size, vckit::next_pow2(static_cast<int>(a.size())) / 2 * 2);
    const int use = std::min<int>(static_cast<int>(a.size()), n);
    const auto window = vckit::make_window(vckit::WindowKind::hann, use);
    std::vector<double> seg(static_cast<size_t>(use));
    for (int i = 0; i < use; ++i)
        seg[static_cast<size_t>(i)] = a.samples[static_cast<size_t>(i)] * window[static_cast<size_t>(i)];
    const auto mag = vckit::magnitude_spectrum(seg, n);
    size_t best = 1;
    for (size_t k = 1; k + 1 < mag.size(); ++k)
        if (mag[k] > mag[best])
            best = k;
    return static_cast<double>(best) * a.sample_rate / n;
}

inline double bin_width_hz(const vckit::AudioBuffer &a, int fft_size = 16384) {
    const int n = std::min<int>(fft_size, vckit::next_pow2(static_cast<int>(a.size())) / 2 * 2);
    return static_cast<double>(a.sample_rate) / n;
}

// Welch-averaged band power in dB over [f_lo, f_hi]
inline double band_energy_db(const vckit::AudioBuffer &a, double f_lo, double f_hi) {
    const int seg_len = 4096;
    const int hop = 2048;
    const auto window = vckit::make_window(vckit::WindowKind::hann, seg_len);
    double power = 0.0;
    int count = 0;
    std::vector<double> seg(static_cast<size_t>(seg_len));
    for (size_t start = 0; start + seg_len <= a.size(); start += hop) {
        for (int i = 0; i < seg_len; ++i)
            seg[static_cast<size_t>(i)] = a.samples[start + static_cast<size_t>(i)] *
                                          window[static_cast<size_t>(i)];
        const auto mag = vckit::magnitude_spectrum(seg, seg_len);
        for (size_t k = 0; k < mag.size(); ++k) {
            const double f = static_cast<double>(k) * a.sample_rate / seg_len;
            if (f >= f_lo && f <= f_hi) {
                power += mag[k] * mag[k];
                ++count;
            }
        }
    }
    return 10.0 * std::log10(power / std::max(1, count) + 1e-300);
}

inline double median_voiced(std::vector<double> f0) {
    std::erase_if(f0, [](double v) { return v <= 0.0; });
    if (f0.empty())
        return 0.0;
    std::sort(f0.begin(), f0.end());
    const size_t n = f0.size();
    return n % 2 == 1 ? f0[n / 2] : 0.5 * (f0[n / 2 - 1] + f0[n / 2]);
}

} // namespace testutil
