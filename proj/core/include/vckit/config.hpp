#pragma once

#include "vckit/audio.hpp"
#include "vckit/perturb.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vckit {

// Flat key=value pipeline configuration with bracketed section headers.
// parse(serialize(c)) == c.
struct PipelineConfig {
    // [audio]
    int sample_rate = 24000;
    FrameConfig frame;

    // [perturb]
    PerturbRanges perturb;

    // [encoder]
    int d_bnf = 256;
    int f_dim = 192;
    int spk_dim = 256;
    std::vector<int> pwav_strides = {6, 5, 4, 2};
    std::vector<int> pwav_channels = {64, 128, 192, 192};

    // [paths]
    std::string weights_path;
    std::string speaker_path;

    // [run]
    uint64_t seed = 1;

    void validate() const;
    std::string serialize() const;
    static PipelineConfig parse(const std::string &text);
    static PipelineConfig load(const std::string &path);
    void save(const std::string &path) const;

    bool operator==(const PipelineConfig &) const = default;
};

} // namespace vckit
