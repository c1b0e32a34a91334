#pragma once

#include "vckit/audio.hpp"
#include "vckit/feature_matrix.hpp"
#include "vckit/yin.hpp"

#include <string>
#include <vector>

namespace vckit {

// Per-frame f0 (Hz, 0 = unvoiced) and RMS energy on the shared grid.
struct ProsodyTrack {
    std::vector<double> f0;
    std::vector<double> energy;
    FrameConfig frame_config;

    int frames() const { return static_cast<int>(f0.size()); }

    // CSV: header "frame_index,f0_hz,energy", one row per frame
    std::string to_csv() const;
    static ProsodyTrack from_csv(const std::string &text);
};

struct SpeakerEmbedding {
    std::vector<double> values;

    int dim() const { return static_cast<int>(values.size()); }
};

// Affine maps from a speaker embedding to per-channel scale/bias:
// gamma = W_gamma * spk + 1, beta = W_beta * spk.
struct CLNParams {
    FeatureMatrix w_gamma; // C x D_spk
    FeatureMatrix w_beta;  // C x D_spk

    int channels() const { return w_gamma.rows; }
};

std::vector<double> extract_f0(const AudioBuffer &audio, const FrameConfig &config,
                               double f_min = 50.0, double f_max = 600.0);

// RMS of each unwindowed frame.
std::vector<double> extract_energy(const AudioBuffer &audio, const FrameConfig &config);

ProsodyTrack extract_prosody(const AudioBuffer &audio, const FrameConfig &config = {});

// Utterance-level z-normalization over voiced frames (population sigma);
// unvoiced frames map to 0. Degenerate sigma (< 1e-6) yields zeros.
// Errors when no frame is voiced.
std::vector<double> znorm_f0(const std::vector<double> &f0);

// Conditional layer normalization: per-frame layer norm over channels
// (eps 1e-5) followed by the speaker-conditioned affine.
FeatureMatrix cln(const FeatureMatrix &x, const SpeakerEmbedding &spk, const CLNParams &params);

// Trailing projection of the prosody encoder (2 channels -> F).
struct ProsodyEncoderWeights {
    CLNParams cln;        // conditions the single normalized-f0 channel
    FeatureMatrix proj_w; // F x 2
    std::vector<double> proj_b;
    bool tanh_out = true;

    int out_dim() const { return proj_w.rows; }
};

ProsodyEncoderWeights identity_prosody_weights(int spk_dim);
ProsodyEncoderWeights init_prosody_weights(int f_dim, int spk_dim, uint64_t seed);

// H_p: concat(gamma * znorm(f0) + beta, energy) projected to F channels.
FeatureMatrix prosody_encode(const std::vector<double> &f0, const std::vector<double> &energy,
                             const SpeakerEmbedding &spk, const ProsodyEncoderWeights &weights);

} // namespace vckit
