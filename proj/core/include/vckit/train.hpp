#pragma once

#include "vckit/audio.hpp"
#include "vckit/decoder.hpp"
#include "vckit/discriminator.hpp"
#include "vckit/encoders.hpp"
#include "vckit/losses.hpp"
#include "vckit/perturb.hpp"

#include <cstdint>
#include <vector>

namespace vckit {

// Graph-side prosody encoder used during training (the pipeline-side
// plain implementation lives in prosody.hpp).
struct ProsodyGraphWeights {
    Tensor w_gamma; // [1, D_spk]
    Tensor w_beta;  // [1, D_spk]
    Tensor proj_w;  // [2, F]
    Tensor proj_b;  // [F]

    std::vector<Tensor> params() const;
    void set_requires_grad(bool on);
};

ProsodyGraphWeights init_prosody_graph_weights(int f_dim, int spk_dim, uint64_t seed);

Tensor prosody_encode_graph(const std::vector<double> &znormed_f0,
                            const std::vector<double> &energy, const Tensor &spk,
                            const ProsodyGraphWeights &weights);

// Eq-style loss stack over both reconstruction paths:
// total_g = sum over paths of (adv_g + fm + stft); total_d sums adv_d.
struct TotalLossGraphs {
    Tensor adv_g, adv_d, fm, stft, total_g, total_d;

    LossBreakdown values() const;
};

TotalLossGraphs total_losses_graph(const Tensor &y, const Tensor &y_hat_f, const Tensor &y_hat_w,
                                   const DiscriminatorWeights &discriminators,
                                   const std::vector<StftResolution> &resolutions);

LossBreakdown total_losses(const AudioBuffer &y, const AudioBuffer &y_hat_f,
                           const AudioBuffer &y_hat_w,
                           const DiscriminatorWeights &discriminators,
                           const std::vector<StftResolution> &resolutions);

struct SmokeTrainConfig {
    int steps = 200;
    uint64_t seed = 1;
    double learning_rate = 1e-4;
    int sample_rate = 24000;
    int f_dim = 32;
    int d_bnf = 16;
    int spk_dim = 8;
    std::vector<int> enc_strides = {6, 5, 4, 2};
    std::vector<int> enc_channels = {16, 24, 32, 32}; // last equals f_dim
    std::vector<int> dec_strides = {2, 4, 5, 6};
    std::vector<int> dec_channels = {24, 16, 8, 1};
    std::vector<StftResolution> loss_resolutions = default_stft_resolutions();
    DiscriminatorConfig discriminators = {
        {2, 3, 5, 7, 11}, {1, 2, 4}, {{256, 64, 256}, {512, 128, 512}}, 4};
    PerturbRanges perturb_ranges;
    double speed_lo = 1.1, speed_hi = 1.5;
};

// Deterministic alternating generator/discriminator SGD on the given
// clips. Inputs alternate between original and speed-augmented variants
// on successive steps; the auxiliary H_w + H_p reconstruction path is
// active throughout. Aborts with the step index if a loss goes non-finite.
std::vector<LossBreakdown> smoke_train(const std::vector<AudioBuffer> &clips,
                                       const SmokeTrainConfig &config);

} // namespace vckit
