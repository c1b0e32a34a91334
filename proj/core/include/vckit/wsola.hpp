#pragma once

#include <vector>

namespace vckit {

// Waveform-similarity overlap-add time stretch: output duration is
// factor * input duration (same pitch). target_len < 0 means
// round(len * factor). factor == 1 reproduces the input up to edge taper.
std::vector<double> wsola_stretch(const std::vector<double> &x, double factor, int sample_rate,
                                  long long target_len = -1);

} // namespace vckit
