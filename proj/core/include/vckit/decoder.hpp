#pragma once

#include "vckit/audio.hpp"
#include "vckit/encoders.hpp"
#include "vckit/feature_matrix.hpp"
#include "vckit/tensor.hpp"

#include <cstdint>
#include <vector>

namespace vckit {

// Toy decoder: h + project(h_p) fed through a transposed-conv stack that
// inverts the pwav-encoder strides, ending in tanh. Output length is
// exactly T * prod(strides). Smoke-training quality only.
struct DecoderWeights {
    Tensor proj_w; // [F, F] applied as h_p @ proj_w
    Tensor proj_b; // [F]
    std::vector<ConvLayerWeights> layers;

    std::vector<Tensor> params() const;
    void set_requires_grad(bool on);
};

// strides in decoder order (default {2,4,5,6}); channels after each layer
// (default {192,128,64,1}, last must be 1).
DecoderWeights init_decoder(int f_dim, const std::vector<int> &strides,
                            const std::vector<int> &channels, uint64_t seed);

std::vector<int> default_decoder_strides();           // {2, 4, 5, 6}
std::vector<int> default_decoder_channels();          // {192, 128, 64, 1}

Tensor toy_decode_graph(const Tensor &h, const Tensor &h_p, const DecoderWeights &weights);

AudioBuffer toy_decode(const FeatureMatrix &h, const FeatureMatrix &h_p,
                       const DecoderWeights &weights, int sample_rate = 24000);

} // namespace vckit
