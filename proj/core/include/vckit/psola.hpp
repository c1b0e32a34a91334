#pragma once

#include <vector>

namespace vckit {

// Pitch marks for TD-PSOLA. Voiced marks follow the f0 track's period
// estimates with peak refinement; unvoiced stretches get fixed-spacing
// pseudo-marks that pass audio through unchanged.
struct EpochTrack {
    std::vector<long long> positions;
    std::vector<bool> voiced;
};

EpochTrack detect_epochs(const std::vector<double> &x, int sample_rate,
                         const std::vector<double> &f0, int hop);

// TD-PSOLA resynthesis: grains from the analysis epochs are overlap-added
// at positions spaced by the target period sr/target_f0. Output has
// exactly the input length; unvoiced regions are copied.
std::vector<double> psola_resynth(const std::vector<double> &x, int sample_rate,
                                  const std::vector<double> &f0,
                                  const std::vector<double> &target_f0, int hop);

} // namespace vckit
