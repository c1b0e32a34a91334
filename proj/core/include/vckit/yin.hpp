#pragma once

#include "vckit/audio.hpp"

namespace vckit {

struct YinParams {
    double f_min = 50.0;
    double f_max = 600.0;
    double threshold = 0.15;
};

// YIN pitch track on the shared frame grid: cumulative-mean-normalized
// difference function, absolute threshold, parabolic interpolation.
// Unvoiced frames report 0. Output length equals frame_count(len, hop).
std::vector<double> yin_f0(const AudioBuffer &audio, const FrameConfig &config,
                           const YinParams &params = {});

} // namespace vckit
