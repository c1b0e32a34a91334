#include "vckit/perturb.hpp"

#include "vckit/errors.hpp"
#include "vckit/psola.hpp"
#include "vckit/resample.hpp"
#include "vckit/rng.hpp"
#include "vckit/wsola.hpp"
#include "vckit/yin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace vckit {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double median_positive(std::vector<double> v) {
    std::erase_if(v, [](double x) { return x <= 0.0; });
    if (v.empty())
        return 0.0;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

void PerturbConfig::validate(int sample_rate) const {
    for (const auto &band : peq) {
        if (band.center_hz <= 0.0 || band.center_hz >= sample_rate / 2.0)
            throw ParamError("eq band center " + std::to_string(band.center_hz) +
                             " Hz not below Nyquist");
        if (band.q <= 0.0)
            throw ParamError("eq band Q must be positive");
    }
    auto check_ratio = [](double r, const char *name) {
        if (!(r > 0.25 && r < 4.0))
            throw ParamError(std::string(name) + " must lie in (0.25, 4)");
    };
    check_ratio(formant_ratio, "formant_ratio");
    check_ratio(pitch_shift_ratio, "pitch_shift_ratio");
    check_ratio(pitch_range_ratio, "pitch_range_ratio");
}

bool PerturbConfig::is_neutral() const {
    if (formant_ratio != 1.0 || pitch_shift_ratio != 1.0 || pitch_range_ratio != 1.0)
        return false;
    for (const auto &band : peq)
        if (band.gain_db != 0.0)
            return false;
    return true;
}

std::string PerturbConfig::serialize() const {
    std::ostringstream out;
    out << "seed=" << seed << "\n";
    out << "formant_ratio=" << fmt_double(formant_ratio) << "\n";
    out << "pitch_shift_ratio=" << fmt_double(pitch_shift_ratio) << "\n";
    out << "pitch_range_ratio=" << fmt_double(pitch_range_ratio) << "\n";
    out << "peq.count=" << peq.size() << "\n";
    for (size_t i = 0; i < peq.size(); ++i) {
        const auto &b = peq[i];
        out << "peq." << i << ".kind=" << to_string(b.kind) << "\n";
        out << "peq." << i << ".center_hz=" << fmt_double(b.center_hz) << "\n";
        out << "peq." << i << ".Q=" << fmt_double(b.q) << "\n";
        out << "peq." << i << ".gain_db=" << fmt_double(b.gain_db) << "\n";
    }
    return out.str();
}

PerturbConfig PerturbConfig::parse(const std::string &text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("perturb config line missing '=': " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const std::string &key) -> const std::string & {
        auto it = kv.find(key);
        if (it == kv.end())
            throw FormatError("perturb config missing key: " + key);
        return it->second;
    };
    PerturbConfig c;
    c.seed = std::stoull(need("seed"));
    c.formant_ratio = std::stod(need("formant_ratio"));
    c.pitch_shift_ratio = std::stod(need("pitch_shift_ratio"));
    c.pitch_range_ratio = std::stod(need("pitch_range_ratio"));
    const size_t count = std::stoul(need("peq.count"));
    for (size_t i = 0; i < count; ++i) {
        const std::string prefix = "peq." + std::to_string(i) + ".";
        EqBand b;
        b.kind = band_kind_from_string(need(prefix + "kind"));
        b.center_hz = std::stod(need(prefix + "center_hz"));
        b.q = std::stod(need(prefix + "Q"));
        b.gain_db = std::stod(need(prefix + "gain_db"));
        c.peq.push_back(b);
    }
    return c;
}

namespace {

std::vector<EqBand> default_band_layout(int sample_rate, const PerturbRanges &r) {
    std::vector<EqBand> bands;
    const double hi = std::min(r.eq_high_hz, 0.45 * sample_rate);
    bands.push_back({BandKind::low_shelf, r.eq_low_hz, 2.0, 0.0});
    for (int i = 0; i < r.eq_peaking_bands; ++i) {
        const double frac = static_cast<double>(i + 1) / (r.eq_peaking_bands + 1);
        const double f = r.eq_low_hz * std::pow(hi / r.eq_low_hz, frac);
        bands.push_back({BandKind::peaking, f, 2.0, 0.0});
    }
    bands.push_back({BandKind::high_shelf, hi, 2.0, 0.0});
    return bands;
}

} // namespace

PerturbConfig neutral_perturb_config(int sample_rate, const PerturbRanges &ranges) {
    PerturbConfig c;
    c.peq = default_band_layout(sample_rate, ranges);
    return c;
}

PerturbConfig sample_perturb_config(uint64_t seed, int sample_rate, const PerturbRanges &ranges) {
    Pcg32 rng(stage_seed(seed, "perturb-config"));
    PerturbConfig c;
    c.seed = seed;
    c.peq = default_band_layout(sample_rate, ranges);
    for (auto &band : c.peq) {
        band.q = rng.uniform(ranges.eq_q_lo, ranges.eq_q_hi);
        band.gain_db = rng.uniform(ranges.eq_gain_db_lo, ranges.eq_gain_db_hi);
    }
    c.formant_ratio = rng.uniform_maybe_inverted(ranges.formant_lo, ranges.formant_hi);
    c.pitch_shift_ratio = rng.uniform_maybe_inverted(ranges.pitch_shift_lo, ranges.pitch_shift_hi);
    c.pitch_range_ratio = rng.uniform_maybe_inverted(ranges.pitch_range_lo, ranges.pitch_range_hi);
    c.validate(sample_rate);
    return c;
}

AudioBuffer parametric_eq(const AudioBuffer &audio, const std::vector<EqBand> &peq) {
    if (audio.sample_rate <= 0)
        throw ParamError("audio has no sample rate");
    AudioBuffer out = audio;
    for (const auto &band : peq) {
        const BiquadCoeffs coeffs =
            design_band(band.kind, audio.sample_rate, band.center_hz, band.q, band.gain_db);
        if (!coeffs.is_stable())
            throw ParamError("unstable eq band at " + std::to_string(band.center_hz) + " Hz");
        out.samples = biquad_process(coeffs, out.samples);
    }
    return out;
}

AudioBuffer formant_shift(const AudioBuffer &audio, double ratio) {
    if (!(ratio >= 0.5 && ratio <= 2.0))
        throw ParamError("formant ratio must lie in [0.5, 2]");
    if (audio.sample_rate <= 0)
        throw ParamError("audio has no sample rate");
    if (ratio == 1.0)
        return audio;
    AudioBuffer out;
    out.sample_rate = audio.sample_rate;
    // play faster by `ratio` (scales all frequencies), then stretch the
    // duration back without touching pitch
    std::vector<double> sped = resample_by_ratio(audio.samples, 1.0 / ratio);
    out.samples = wsola_stretch(sped, ratio, audio.sample_rate,
                                static_cast<long long>(audio.size()));
    return out;
}

PitchRandomizeResult pitch_randomize(const AudioBuffer &audio, double shift_ratio,
                                     double range_ratio, const std::vector<double> &f0_track,
                                     const FrameConfig &config) {
    if (!(shift_ratio > 0.25 && shift_ratio < 4.0) || !(range_ratio > 0.25 && range_ratio < 4.0))
        throw ParamError("pitch ratios must lie in (0.25, 4)");
    const int hop = config.hop(audio.sample_rate);
    if (frame_count(audio.size(), hop) != static_cast<int>(f0_track.size()))
        throw ParamError("f0 track is not aligned to the audio's frame grid");

    const double med = median_positive(f0_track);
    if (med <= 0.0)
        return {audio, false}; // fully unvoiced

    if (shift_ratio == 1.0 && range_ratio == 1.0)
        return {audio, true}; // target equals source track exactly

    std::vector<double> target(f0_track.size(), 0.0);
    for (size_t i = 0; i < f0_track.size(); ++i) {
        if (f0_track[i] > 0.0)
            target[i] = shift_ratio * med * std::pow(f0_track[i] / med, range_ratio);
    }

    AudioBuffer out;
    out.sample_rate = audio.sample_rate;
    out.samples = psola_resynth(audio.samples, audio.sample_rate, f0_track, target, hop);
    return {std::move(out), true};
}

namespace {

// Internal pitch track for PSOLA epoch placement. More permissive than
// the analysis-grade extractor: EQ resonances are not phase-coherent
// across WSOLA splices, which inflates the normalized difference at the
// true lag; a hard 0.15 threshold would leave spurious unvoiced islands.
std::vector<double> chain_f0_track(const AudioBuffer &audio, const FrameConfig &frames) {
    YinParams params;
    params.threshold = 0.3;
    auto f0 = yin_f0(audio, frames, params);
    for (size_t t = 1; t + 1 < f0.size(); ++t)
        if (f0[t] <= 0.0 && f0[t - 1] > 0.0 && f0[t + 1] > 0.0)
            f0[t] = 0.5 * (f0[t - 1] + f0[t + 1]);
    // median-5 over voiced neighbors: the range exponent amplifies any
    // frame-to-frame measurement jitter into target-period jitter
    auto smoothed = f0;
    for (size_t t = 0; t < f0.size(); ++t) {
        if (f0[t] <= 0.0)
            continue;
        std::vector<double> nearby;
        for (long long k = -2; k <= 2; ++k) {
            const long long i = static_cast<long long>(t) + k;
            if (i >= 0 && i < static_cast<long long>(f0.size()) && f0[static_cast<size_t>(i)] > 0.0)
                nearby.push_back(f0[static_cast<size_t>(i)]);
        }
        std::sort(nearby.begin(), nearby.end());
        smoothed[t] = nearby[nearby.size() / 2];
    }
    return smoothed;
}

} // namespace

AudioBuffer perturb(const AudioBuffer &audio, const PerturbConfig &config) {
    config.validate(audio.sample_rate);

    AudioBuffer eq = parametric_eq(audio, config.peq);
    AudioBuffer shifted = formant_shift(eq, config.formant_ratio);

    if (config.pitch_shift_ratio == 1.0 && config.pitch_range_ratio == 1.0)
        return shifted;

    const FrameConfig frames;
    const auto f0_shifted = chain_f0_track(shifted, frames);

    // fs scaled the pitch by formant_ratio; fold the correction into the
    // shift so the chain's median lands at shift_ratio * source median
    double shift = config.pitch_shift_ratio;
    const double med_shifted = median_positive(f0_shifted);
    if (med_shifted > 0.0) {
        const auto f0_src = chain_f0_track(audio, frames);
        const double med_src = median_positive(f0_src);
        if (med_src > 0.0)
            shift = config.pitch_shift_ratio * med_src / med_shifted;
        shift = std::clamp(shift, 0.26, 3.99);
    }

    auto result = pitch_randomize(shifted, shift, config.pitch_range_ratio, f0_shifted, frames);
    return std::move(result.audio);
}

AudioBuffer speed_augment(const AudioBuffer &audio, double factor) {
    if (!(factor >= 1.0 && factor <= 2.0))
        throw ParamError("speed factor must lie in [1, 2]");
    if (factor == 1.0)
        return audio;
    AudioBuffer out;
    out.sample_rate = audio.sample_rate;
    out.samples = resample_by_ratio(audio.samples, 1.0 / factor);
    return out;
}

} // namespace vckit
