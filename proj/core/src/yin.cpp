#include "vckit/yin.hpp"

#include "vckit/errors.hpp"
#include "vckit/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace vckit {

namespace {

// Linear correlation C(tau) = sum_{j<W} s[j]*s[j+tau] for tau in [0, tau_max],
// via FFT (no wrap: fft size >= len(s) and s is zero-padded).
std::vector<double> windowed_autocorr(const std::vector<double> &seg, int window, int tau_max) {
    const int n = next_pow2(static_cast<int>(seg.size()) + 1);
    std::vector<std::complex<double>> all(static_cast<size_t>(n));
    std::vector<std::complex<double>> head(static_cast<size_t>(n));
    for (size_t i = 0; i < seg.size(); ++i)
        all[i] = seg[i];
    for (int i = 0; i < window; ++i)
        head[static_cast<size_t>(i)] = seg[static_cast<size_t>(i)];
    fft_inplace(all, false);
    fft_inplace(head, false);
    for (int i = 0; i < n; ++i)
        all[static_cast<size_t>(i)] *= std::conj(head[static_cast<size_t>(i)]);
    fft_inplace(all, true);
    std::vector<double> corr(static_cast<size_t>(tau_max) + 1);
    for (int tau = 0; tau <= tau_max; ++tau)
        corr[static_cast<size_t>(tau)] = all[static_cast<size_t>(tau)].real() / n;
    return corr;
}

} // namespace

std::vector<double> yin_f0(const AudioBuffer &audio, const FrameConfig &config,
                           const YinParams &params) {
    config.validate();
    if (audio.sample_rate <= 0)
        throw ParamError("audio has no sample rate");
    const int sr = audio.sample_rate;
    if (!(params.f_min < params.f_max && params.f_max < sr / 2.0))
        throw ParamError("need f_min < f_max < sample_rate/2");
    const int window = config.frame_len(sr);
    const int hop = config.hop(sr);
    if (static_cast<int>(audio.size()) < window)
        throw ParamError("audio shorter than one frame");

    const int tau_min = std::max(2, static_cast<int>(std::floor(sr / params.f_max)));
    const int tau_max = static_cast<int>(std::ceil(sr / params.f_min));
    if (tau_max >= window)
        throw ParamError("frame too short for f_min");

    const int half = window / 2;
    const int pad = window + tau_max;
    const auto padded = reflect_pad(audio.samples, pad);
    const int T = frame_count(audio.size(), hop);

    std::vector<double> f0(static_cast<size_t>(T), 0.0);
    std::vector<double> d(static_cast<size_t>(tau_max) + 1);
    std::vector<double> dprime(static_cast<size_t>(tau_max) + 1);

    for (int t = 0; t < T; ++t) {
        // segment starts at the frame's left edge and carries tau_max lookahead
        const long long start = static_cast<long long>(t) * hop - half + pad;
        std::vector<double> seg(padded.begin() + start, padded.begin() + start + window + tau_max);

        // energy prefix sums for the shifted-window term
        std::vector<double> prefix(seg.size() + 1, 0.0);
        for (size_t i = 0; i < seg.size(); ++i)
            prefix[i + 1] = prefix[i] + seg[i] * seg[i];
        const double e0 = prefix[static_cast<size_t>(window)];
        if (e0 < 1e-10)
            continue; // silence

        const auto corr = windowed_autocorr(seg, window, tau_max);
        for (int tau = 0; tau <= tau_max; ++tau) {
            const double e_tau = prefix[static_cast<size_t>(tau + window)] -
                                 prefix[static_cast<size_t>(tau)];
            d[static_cast<size_t>(tau)] = std::max(0.0, e0 + e_tau - 2.0 * corr[static_cast<size_t>(tau)]);
        }

        // cumulative mean normalized difference
        dprime[0] = 1.0;
        double running = 0.0;
        for (int tau = 1; tau <= tau_max; ++tau) {
            running += d[static_cast<size_t>(tau)];
            dprime[static_cast<size_t>(tau)] =
                running > 0.0 ? d[static_cast<size_t>(tau)] * tau / running : 1.0;
        }

        int best = -1;
        for (int tau = tau_min; tau <= tau_max; ++tau) {
            if (dprime[static_cast<size_t>(tau)] < params.threshold) {
                best = tau;
                while (best + 1 <= tau_max &&
                       dprime[static_cast<size_t>(best + 1)] < dprime[static_cast<size_t>(best)])
                    ++best;
                break;
            }
        }
        if (best < 0)
            continue; // unvoiced

        double tau_refined = static_cast<double>(best);
        if (best > 0 && best < tau_max) {
            const double s0 = dprime[static_cast<size_t>(best - 1)];
            const double s1 = dprime[static_cast<size_t>(best)];
            const double s2 = dprime[static_cast<size_t>(best + 1)];
            const double denom = s0 - 2.0 * s1 + s2;
            if (std::fabs(denom) > 1e-12) {
                double delta = 0.5 * (s0 - s2) / denom;
                if (std::fabs(delta) <= 1.0)
                    tau_refined += delta;
            }
        }
        f0[static_cast<size_t>(t)] = sr / tau_refined;
    }
    return f0;
}

} // namespace vckit
