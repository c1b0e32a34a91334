#include "vckit/wsola.hpp"

#include "vckit/audio.hpp"
#include "vckit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace vckit {

namespace {

double sample_at(const std::vector<double> &x, long long i) {
    if (i < 0 || i >= static_cast<long long>(x.size()))
        return 0.0;
    return x[static_cast<size_t>(i)];
}

// normalized cross-correlation between x[a..a+n) and x[b..b+n)
double segment_similarity(const std::vector<double> &x, long long a, long long b, int n) {
    double dot = 0.0, ea = 0.0, eb = 0.0;
    for (int i = 0; i < n; ++i) {
        const double va = sample_at(x, a + i);
        const double vb = sample_at(x, b + i);
        dot += va * vb;
        ea += va * va;
        eb += vb * vb;
    }
    const double denom = std::sqrt(ea * eb);
    return denom > 1e-12 ? dot / denom : 0.0;
}

} // namespace

std::vector<double> wsola_stretch(const std::vector<double> &x, double factor, int sample_rate,
                                  long long target_len) {
    if (factor <= 0.0)
        throw ParamError("stretch factor must be positive");
    if (x.empty())
        return {};
    if (target_len < 0)
        target_len = std::llround(static_cast<double>(x.size()) * factor);
    if (target_len == 0)
        return {};

    // 25 ms segments, 50% overlap, +-7.5 ms similarity search
    int seg = std::max(64, (sample_rate * 25) / 1000) & ~1;
    seg = std::min<int>(seg, static_cast<int>(x.size()) & ~1);
    if (seg < 4) {
        std::vector<double> out(static_cast<size_t>(target_len), 0.0);
        for (long long i = 0; i < target_len; ++i)
            out[static_cast<size_t>(i)] = sample_at(x, std::llround(i / factor));
        return out;
    }
    const int hop_syn = seg / 2;
    const int tolerance = std::max(16, (sample_rate * 15) / 2000);
    const double hop_ana = hop_syn / factor;

    const auto window = make_window(WindowKind::hann, seg);
    std::vector<double> acc(static_cast<size_t>(target_len) + seg, 0.0);
    std::vector<double> wsum(acc.size(), 0.0);

    long long prev_read = 0;
    const long long n_frames = (target_len + hop_syn - 1) / hop_syn + 1;
    for (long long k = 0; k < n_frames; ++k) {
        const long long nominal = std::llround(static_cast<double>(k) * hop_ana);
        long long read = nominal;
        if (k > 0) {
            // natural continuation of the previously copied segment
            const long long cont = prev_read + hop_syn;
            double best = -2.0;
            long long best_delta = 0;
            for (long long delta = -tolerance; delta <= tolerance; ++delta) {
                const long long cand = nominal + delta;
                if (cand + seg <= 0 || cand >= static_cast<long long>(x.size()))
                    continue;
                double sim = segment_similarity(x, cand, cont, seg);
                if (sim > best + 1e-12 || (std::fabs(sim - best) <= 1e-12 &&
                                           std::llabs(delta) < std::llabs(best_delta))) {
                    best = sim;
                    best_delta = delta;
                }
            }
            read = nominal + best_delta;
        }
        prev_read = read;

        const long long out_pos = k * hop_syn;
        for (int i = 0; i < seg; ++i) {
            const long long o = out_pos + i;
            if (o < 0 || o >= static_cast<long long>(acc.size()))
                continue;
            acc[static_cast<size_t>(o)] += window[static_cast<size_t>(i)] * sample_at(x, read + i);
            wsum[static_cast<size_t>(o)] += window[static_cast<size_t>(i)];
        }
    }

    std::vector<double> out(static_cast<size_t>(target_len));
    for (long long i = 0; i < target_len; ++i) {
        const double w = wsum[static_cast<size_t>(i)];
        out[static_cast<size_t>(i)] =
            w > 1e-6 ? acc[static_cast<size_t>(i)] / w : sample_at(x, std::llround(i / factor));
    }
    return out;
}

} // namespace vckit
