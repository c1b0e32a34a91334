#pragma once

#include "vckit/audio.hpp"
#include "vckit/biquad.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vckit {

struct EqBand {
    BandKind kind = BandKind::peaking;
    double center_hz = 1000.0;
    double q = 2.0;
    double gain_db = 0.0;
};

// Sampling ranges for the perturbation parameters. Ratios are drawn
// uniformly from [lo, hi] and inverted with probability 1/2.
struct PerturbRanges {
    double formant_lo = 1.0, formant_hi = 1.4;
    double pitch_shift_lo = 1.0, pitch_shift_hi = 2.0;
    double pitch_range_lo = 1.0, pitch_range_hi = 1.5;
    int eq_peaking_bands = 8;
    double eq_low_hz = 60.0, eq_high_hz = 10000.0;
    double eq_q_lo = 2.0, eq_q_hi = 5.0;
    double eq_gain_db_lo = -12.0, eq_gain_db_hi = 12.0;
};

// The sampled parameter set for one perturbation pass, reproducible
// from its seed.
struct PerturbConfig {
    uint64_t seed = 0;
    std::vector<EqBand> peq;
    double formant_ratio = 1.0;
    double pitch_shift_ratio = 1.0;
    double pitch_range_ratio = 1.0;

    void validate(int sample_rate) const;
    bool is_neutral() const;

    // key=value text block, one field per line; parse(serialize(c)) == c
    std::string serialize() const;
    static PerturbConfig parse(const std::string &text);

    bool operator==(const PerturbConfig &) const = default;
};

// Neutral config: 0 dB gains on the default band layout, all ratios 1.
PerturbConfig neutral_perturb_config(int sample_rate, const PerturbRanges &ranges = {});

// Deterministic draw: the same seed yields a bit-identical config.
PerturbConfig sample_perturb_config(uint64_t seed, int sample_rate,
                                    const PerturbRanges &ranges = {});

// Serial biquad cascade over the given bands.
AudioBuffer parametric_eq(const AudioBuffer &audio, const std::vector<EqBand> &peq);

// Scales the spectral envelope by `ratio` at constant duration
// (resample by 1/ratio then WSOLA back). Pitch scales along; the
// pitch-randomization stage afterwards owns pitch.
AudioBuffer formant_shift(const AudioBuffer &audio, double ratio);

struct PitchRandomizeResult {
    AudioBuffer audio;
    bool pitch_modified = false; // false when the input had no voiced frames
};

// TD-PSOLA resynthesis toward
//   f0'(t) = shift_ratio * median(f0) * (f0(t) / median(f0))^range_ratio
// on voiced frames; unvoiced regions are copied. f0_track lives on the
// shared 10 ms grid of `audio`.
PitchRandomizeResult pitch_randomize(const AudioBuffer &audio, double shift_ratio,
                                     double range_ratio, const std::vector<double> &f0_track,
                                     const FrameConfig &config = {});

// Full chain: pitch_randomize(formant_shift(parametric_eq(audio))).
// The pr stage compensates the pitch scaling introduced by fs so the
// chain's median f0 lands at pitch_shift_ratio times the source median.
AudioBuffer perturb(const AudioBuffer &audio, const PerturbConfig &config);

// Playback-rate change: duration divides by `factor`, pitch multiplies.
AudioBuffer speed_augment(const AudioBuffer &audio, double factor);

} // namespace vckit
