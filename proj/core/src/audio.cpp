#include "vckit/audio.hpp"

#include "vckit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vckit {

WindowKind window_kind_from_string(const std::string &name) {
    if (name == "hann")
        return WindowKind::hann;
    if (name == "rectangular" || name == "rect")
        return WindowKind::rectangular;
    throw ParamError("unknown window kind: " + name);
}

std::string to_string(WindowKind kind) {
    return kind == WindowKind::hann ? "hann" : "rectangular";
}

int FrameConfig::frame_len(int sample_rate) const {
    return static_cast<int>(std::lround(frame_len_ms * sample_rate / 1000.0));
}

int FrameConfig::hop(int sample_rate) const {
    return static_cast<int>(std::lround(hop_ms * sample_rate / 1000.0));
}

void FrameConfig::validate() const {
    if (frame_len_ms <= 0 || hop_ms <= 0)
        throw ParamError("frame_len_ms and hop_ms must be positive");
    if (hop_ms > frame_len_ms)
        throw ParamError("hop_ms must not exceed frame_len_ms");
}

std::vector<double> make_window(WindowKind kind, int n) {
    std::vector<double> w(static_cast<size_t>(n), 1.0);
    if (kind == WindowKind::hann) {
        for (int i = 0; i < n; ++i)
            w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / n));
    }
    return w;
}

int frame_count(size_t len, int hop) {
    if (hop <= 0)
        throw ParamError("hop must be positive");
    return static_cast<int>((len + static_cast<size_t>(hop) - 1) / static_cast<size_t>(hop));
}

std::vector<double> reflect_pad(const std::vector<double> &x, int pad) {
    const int n = static_cast<int>(x.size());
    if (n == 0)
        throw ParamError("cannot pad an empty signal");
    std::vector<double> out;
    out.reserve(x.size() + 2 * static_cast<size_t>(pad));
    auto mirror = [&](long long i) {
        // reflect without repeating the edge sample; degenerate n==1 holds
        long long m = n - 1;
        if (m == 0)
            return x[0];
        long long p = std::llabs(i) % (2 * m);
        if (p > m)
            p = 2 * m - p;
        return x[static_cast<size_t>(p)];
    };
    for (long long i = -pad; i < static_cast<long long>(n) + pad; ++i)
        out.push_back(mirror(i));
    return out;
}

namespace {

std::vector<std::vector<double>> frames_impl(const AudioBuffer &audio, const FrameConfig &config,
                                             bool windowed) {
    config.validate();
    if (audio.sample_rate <= 0)
        throw ParamError("audio has no sample rate");
    if (audio.empty())
        throw ParamError("audio shorter than one frame");
    const int flen = config.frame_len(audio.sample_rate);
    const int hop = config.hop(audio.sample_rate);
    const int half = flen / 2;
    const int T = frame_count(audio.size(), hop);

    const auto padded = reflect_pad(audio.samples, half + flen);
    const auto win = make_window(windowed ? config.window : WindowKind::rectangular, flen);

    std::vector<std::vector<double>> frames(static_cast<size_t>(T));
    for (int t = 0; t < T; ++t) {
        // frame t is centered at sample t*hop; its left edge t*hop - half
        // lands at t*hop + flen in the padded signal (pad = half + flen)
        const size_t start = static_cast<size_t>(t) * hop + flen;
        std::vector<double> f(static_cast<size_t>(flen));
        for (int i = 0; i < flen; ++i)
            f[i] = padded[start + i] * win[i];
        frames[static_cast<size_t>(t)] = std::move(f);
    }
    return frames;
}

} // namespace

std::vector<std::vector<double>> frame_signal(const AudioBuffer &audio,
                                              const FrameConfig &config) {
    return frames_impl(audio, config, true);
}

std::vector<std::vector<double>> frame_signal_raw(const AudioBuffer &audio,
                                                  const FrameConfig &config) {
    return frames_impl(audio, config, false);
}

double rms_error(const std::vector<double> &a, const std::vector<double> &b) {
    const size_t n = std::min(a.size(), b.size());
    if (n == 0)
        return 0.0;
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(n));
}

} // namespace vckit
