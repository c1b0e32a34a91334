#pragma once

#include "vckit/losses.hpp"
#include "vckit/tensor.hpp"

#include <cstdint>
#include <vector>

namespace vckit {

// Toy discriminator bank for desk-scale smoke training: multi-period,
// multi-scale, and multi-resolution spectrogram branches, each a small
// 3-layer strided conv stack.
struct DiscriminatorConfig {
    std::vector<int> periods = {2, 3, 5, 7, 11};
    std::vector<int> scales = {1, 2, 4};
    std::vector<StftResolution> stft_resolutions = {{512, 128, 512}, {1024, 256, 1024}};
    int base_channels = 8;

    void validate() const;
    size_t count() const {
        return periods.size() + scales.size() + stft_resolutions.size();
    }
};

struct DiscLayer {
    Tensor w; // [Cout, K, Cin]
    Tensor b; // [Cout]
    int stride = 1;
};

struct DiscriminatorWeights {
    DiscriminatorConfig config;
    std::vector<std::vector<DiscLayer>> stacks; // periods, then scales, then resolutions

    std::vector<Tensor> params() const;
    void set_requires_grad(bool on);
};

DiscriminatorWeights init_discriminators(const DiscriminatorConfig &config, uint64_t seed);

// Score map plus every layer activation (for the feature-matching loss).
struct DiscOutput {
    Tensor score;
    std::vector<Tensor> feats;
};

std::vector<DiscOutput> run_discriminators(const Tensor &wave,
                                           const DiscriminatorWeights &weights);

std::vector<Tensor> scores_of(const std::vector<DiscOutput> &outputs);
std::vector<std::vector<Tensor>> feats_of(const std::vector<DiscOutput> &outputs);

} // namespace vckit
