#pragma once

#include "vckit/audio.hpp"
#include "vckit/feature_matrix.hpp"
#include "vckit/tensor.hpp"

#include <cstdint>
#include <vector>

namespace vckit {

// conv1d -> layer norm (learned per-channel scale/shift) -> ReLU
struct ConvLayerWeights {
    Tensor w;       // [Cout, K, Cin]
    Tensor b;       // [Cout]
    Tensor ln_gain; // [Cout]
    Tensor ln_bias; // [Cout]
    int stride = 1;
};

struct EncoderWeights {
    std::vector<ConvLayerWeights> layers;

    std::vector<Tensor> params() const;
    void set_requires_grad(bool on);
    int out_channels() const;
};

// Tensor <-> FeatureMatrix bridges.
Tensor to_tensor(const FeatureMatrix &m, bool requires_grad = false);
FeatureMatrix to_feature_matrix(const Tensor &t);

// BNF encoder: two conv layers (k=5, stride 1), D_bnf -> F, time preserved.
EncoderWeights init_bnf_encoder(int d_bnf, int f_dim, uint64_t seed);

// Perturbed-wav encoder: four strided conv layers (kernel = 2 * stride),
// 1 -> channels[0] -> ... -> channels[3]. channels[3] is F. The default
// strides (6,5,4,2) multiply to the 240-sample hop of the shared grid.
EncoderWeights init_pwav_encoder(const std::vector<int> &strides,
                                 const std::vector<int> &channels, uint64_t seed);

std::vector<int> default_pwav_strides();  // {6, 5, 4, 2}
std::vector<int> paper_pwav_strides();    // {6, 5, 5, 2}, selectable via config
std::vector<int> default_pwav_channels(int f_dim); // {64, 128, 192, F}

// Shared forward pass over the layer stack.
Tensor encoder_forward(const Tensor &x, const EncoderWeights &weights);

// Zero rows appended up to `rows`; backward drops them.
Tensor pad_rows(const Tensor &a, int rows);

Tensor bnf_encode_graph(const Tensor &bnf_aligned, const EncoderWeights &weights);
FeatureMatrix bnf_encode(const FeatureMatrix &bnf_aligned, const EncoderWeights &weights);

// wave is rank-1; output is trimmed/padded to target_frames rows.
Tensor pwav_encode_graph(const Tensor &wave, const EncoderWeights &weights, int target_frames);
FeatureMatrix pwav_encode(const AudioBuffer &audio, const EncoderWeights &weights,
                          int target_frames = -1, const FrameConfig &grid = {});

} // namespace vckit
