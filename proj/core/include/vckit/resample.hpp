#pragma once

#include "vckit/audio.hpp"

namespace vckit {

// Band-limited sample-rate conversion. Polyphase windowed sinc
// (Kaiser beta 8.6, 32 taps per phase); output length is
// round(len * target / source). target_rate == sample_rate is the identity.
AudioBuffer resample(const AudioBuffer &audio, int target_rate);

// Core kernel: resamples by an arbitrary positive ratio (output/input
// length ratio) keeping the sample-rate tag unchanged. Used for the
// formant-shift and speed-augmentation stages.
std::vector<double> resample_by_ratio(const std::vector<double> &x, double ratio);

} // namespace vckit
