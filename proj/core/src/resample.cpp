#include "vckit/resample.hpp"

#include "vckit/errors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace vckit {

namespace {

constexpr int kZeroCrossings = 16;  // half-width, i.e. 32 taps per phase
constexpr int kTableOversample = 512;
constexpr double kKaiserBeta = 8.6;

double bessel_i0(double x) {
    // power series; converges quickly for the argument range we use
    double sum = 1.0, term = 1.0;
    const double half_x = x / 2.0;
    for (int k = 1; k < 64; ++k) {
        term *= (half_x / k) * (half_x / k);
        sum += term;
        if (term < 1e-16 * sum)
            break;
    }
    return sum;
}

// kernel(t) = sinc(t) * kaiser(t / kZeroCrossings), tabulated at
// kTableOversample points per zero crossing. Lookup interpolates linearly.
const std::vector<double> &kernel_table() {
    static const std::vector<double> table = [] {
        const int n = kZeroCrossings * kTableOversample + 2;
        std::vector<double> t(static_cast<size_t>(n));
        const double denom = bessel_i0(kKaiserBeta);
        for (int i = 0; i < n; ++i) {
            double x = static_cast<double>(i) / kTableOversample;
            if (x >= kZeroCrossings) {
                t[i] = 0.0;
                continue;
            }
            double sinc = x == 0.0 ? 1.0
                                   : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
            double arg = 1.0 - (x / kZeroCrossings) * (x / kZeroCrossings);
            double window = bessel_i0(kKaiserBeta * std::sqrt(arg)) / denom;
            t[i] = sinc * window;
        }
        return t;
    }();
    return table;
}

double kernel_value(double x) {
    x = std::fabs(x);
    if (x >= kZeroCrossings)
        return 0.0;
    const auto &table = kernel_table();
    double pos = x * kTableOversample;
    int idx = static_cast<int>(pos);
    double frac = pos - idx;
    return table[idx] + frac * (table[idx + 1] - table[idx]);
}

} // namespace

std::vector<double> resample_by_ratio(const std::vector<double> &x, double ratio) {
    if (ratio <= 0.0)
        throw ParamError("resample ratio must be positive");
    if (x.empty())
        return {};
    if (ratio == 1.0)
        return x;

    // cutoff scales with the smaller of the two rates when downsampling
    const double scale = std::min(1.0, ratio);
    const double support = kZeroCrossings / scale;
    const long long in_len = static_cast<long long>(x.size());
    const long long out_len = std::llround(static_cast<double>(in_len) * ratio);

    std::vector<double> out(static_cast<size_t>(out_len));
    for (long long n = 0; n < out_len; ++n) {
        const double center = static_cast<double>(n) / ratio;
        long long lo = static_cast<long long>(std::ceil(center - support));
        long long hi = static_cast<long long>(std::floor(center + support));
        lo = std::max<long long>(lo, 0);
        hi = std::min<long long>(hi, in_len - 1);
        double acc = 0.0;
        for (long long k = lo; k <= hi; ++k)
            acc += x[static_cast<size_t>(k)] * kernel_value(scale * (center - k));
        out[static_cast<size_t>(n)] = scale * acc;
    }
    return out;
}

AudioBuffer resample(const AudioBuffer &audio, int target_rate) {
    if (target_rate <= 0)
        throw ParamError("target_rate must be positive");
    if (audio.sample_rate <= 0)
        throw ParamError("audio has no sample rate");
    if (target_rate == audio.sample_rate)
        return audio;
    const double ratio = static_cast<double>(target_rate) / audio.sample_rate;
    AudioBuffer out;
    out.sample_rate = target_rate;
    out.samples = resample_by_ratio(audio.samples, ratio);
    return out;
}

} // namespace vckit
