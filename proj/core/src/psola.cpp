#include "vckit/psola.hpp"

#include "vckit/audio.hpp"
#include "vckit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace vckit {

namespace {

constexpr int kMinPeriod = 16;

double sample_at(const std::vector<double> &x, long long i) {
    if (i < 0 || i >= static_cast<long long>(x.size()))
        return 0.0;
    return x[static_cast<size_t>(i)];
}

int frame_of(long long pos, int hop, int n_frames) {
    long long f = (pos + hop / 2) / hop;
    return static_cast<int>(std::clamp<long long>(f, 0, n_frames - 1));
}

// local period in samples at `pos`; 0 when the frame is unvoiced
double period_at(const std::vector<double> &f0, long long pos, int hop, int sr) {
    const int t = frame_of(pos, hop, static_cast<int>(f0.size()));
    const double hz = f0[static_cast<size_t>(t)];
    return hz > 0.0 ? sr / hz : 0.0;
}

// anchor mark: local energy peak
long long refine_energy(const std::vector<double> &x, long long center, long long radius) {
    long long best = center;
    double best_v = -1.0;
    for (long long i = center - radius; i <= center + radius; ++i) {
        double e = 0.0;
        for (int k = -3; k <= 3; ++k) {
            const double v = sample_at(x, i + k);
            e += v * v;
        }
        if (e > best_v) {
            best_v = e;
            best = i;
        }
    }
    return best;
}

// subsequent marks: phase lock to the previous period's waveform so
// grain extraction stays coherent across the region
long long refine_correlation(const std::vector<double> &x, long long prev, long long nominal,
                             long long radius, long long half) {
    long long best = nominal;
    double best_v = -1e300;
    for (long long cand = nominal - radius; cand <= nominal + radius; ++cand) {
        double dot = 0.0, energy = 0.0;
        for (long long m = -half; m < half; ++m) {
            const double a = sample_at(x, cand + m);
            const double b = sample_at(x, prev + m);
            dot += a * b;
            energy += a * a;
        }
        const double v = energy > 1e-12 ? dot / std::sqrt(energy) : -1e300;
        if (v > best_v) {
            best_v = v;
            best = cand;
        }
    }
    return best;
}

} // namespace

EpochTrack detect_epochs(const std::vector<double> &x, int sample_rate,
                         const std::vector<double> &f0, int hop) {
    if (hop <= 0)
        throw ParamError("hop must be positive");
    const long long n = static_cast<long long>(x.size());
    const long long pseudo = std::max<long long>(kMinPeriod, sample_rate * 5 / 1000); // 5 ms

    EpochTrack track;
    long long pos = 0;
    while (pos < n) {
        double period = period_at(f0, pos, hop, sample_rate);
        if (period <= 0.0) {
            track.positions.push_back(pos);
            track.voiced.push_back(false);
            pos += pseudo;
            continue;
        }
        // entering a voiced region: anchor on an energy peak, then walk
        // period by period keeping the extraction phase locked
        long long p = std::max<long long>(kMinPeriod, std::llround(period));
        pos = refine_energy(x, pos + p / 2, p / 2);
        while (pos < n) {
            period = period_at(f0, pos, hop, sample_rate);
            if (period <= 0.0)
                break;
            track.positions.push_back(pos);
            track.voiced.push_back(true);
            p = std::max<long long>(kMinPeriod, std::llround(period));
            pos = refine_correlation(x, track.positions.back(), track.positions.back() + p,
                                     std::max<long long>(2, p / 5), p / 2);
            if (pos <= track.positions.back())
                pos = track.positions.back() + kMinPeriod;
        }
    }
    return track;
}

std::vector<double> psola_resynth(const std::vector<double> &x, int sample_rate,
                                  const std::vector<double> &f0,
                                  const std::vector<double> &target_f0, int hop) {
    if (f0.size() != target_f0.size())
        throw ParamError("f0 and target_f0 tracks must have equal length");
    const long long n = static_cast<long long>(x.size());
    if (n == 0)
        return {};

    const EpochTrack epochs = detect_epochs(x, sample_rate, f0, hop);
    if (epochs.positions.empty())
        return x;
    const long long pseudo = std::max<long long>(kMinPeriod, sample_rate * 5 / 1000);

    std::vector<double> acc(x.size(), 0.0);
    std::vector<double> wsum(x.size(), 0.0);
    // voiced samples are owned by the resynthesis: gaps there become
    // silence (a lowered pulse train is sparse), never source copies
    std::vector<char> resynthesized(x.size(), 0);
    for (size_t i = 0; i < x.size(); ++i)
        resynthesized[i] = period_at(f0, static_cast<long long>(i), hop, sample_rate) > 0.0;

    double s = static_cast<double>(epochs.positions.front());
    size_t j = 0; // monotonic analysis-epoch cursor
    while (s < static_cast<double>(n)) {
        const long long sp = std::llround(s);
        while (j + 1 < epochs.positions.size() &&
               std::llabs(epochs.positions[j + 1] - sp) <= std::llabs(epochs.positions[j] - sp))
            ++j;
        const long long ap = epochs.positions[j];
        const bool voiced = epochs.voiced[j];

        double p_ana;
        if (voiced) {
            const double per = period_at(f0, ap, hop, sample_rate);
            p_ana = std::max<double>(kMinPeriod, per > 0.0 ? per : static_cast<double>(pseudo));
        } else {
            p_ana = static_cast<double>(pseudo);
        }
        double p_syn;
        if (voiced) {
            const double tgt = period_at(target_f0, sp, hop, sample_rate);
            p_syn = tgt > 0.0 ? tgt : p_ana;
        } else {
            p_syn = static_cast<double>(pseudo);
        }

        // short grains when raising pitch (one source pulse per grain),
        // standard two analysis periods otherwise
        const long long half =
            std::max<long long>(kMinPeriod / 2, std::llround(std::min(p_ana, p_syn)));
        const int grain = static_cast<int>(2 * half);
        const auto window = make_window(WindowKind::hann, grain);
        for (int i = 0; i < grain; ++i) {
            const long long o = sp - half + i;
            if (o < 0 || o >= n)
                continue;
            acc[static_cast<size_t>(o)] +=
                window[static_cast<size_t>(i)] * sample_at(x, ap - half + i);
            wsum[static_cast<size_t>(o)] += window[static_cast<size_t>(i)];
        }
        s += std::max(static_cast<double>(kMinPeriod) / 2.0, p_syn);
    }

    // divisor clamped at 1: windows are normalized only where they
    // genuinely overlap, so Hann-suppressed neighbors stay suppressed
    std::vector<double> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (wsum[i] > 1e-6 || resynthesized[i])
            out[i] = acc[i] / std::max(wsum[i], 1.0);
        else
            out[i] = x[i];
    }
    return out;
}

} // namespace vckit
