#pragma once

#include "vckit/feature_matrix.hpp"

#include <cstdint>
#include <string>

namespace vckit {

// Bottleneck features produced by an external ASR model; ingested from
// files, never computed here.
struct BnfMatrix {
    FeatureMatrix values;     // T_bnf x D_bnf
    uint32_t source_hop_ms = 10;
};

// BNF1 binary: magic "BNF1", little-endian u32 T, u32 D, u32
// source_hop_ms, then T*D f32 row-major.
void write_bnf(const std::string &path, const BnfMatrix &bnf);
BnfMatrix read_bnf(const std::string &path);

// CSV fallback: one frame per line, comma-separated.
void write_bnf_csv(const std::string &path, const BnfMatrix &bnf);
BnfMatrix read_bnf_csv(const std::string &path);

// Linear interpolation along time onto target_T uniformly spaced points;
// endpoints map to endpoints.
FeatureMatrix align_bnf(const BnfMatrix &bnf, int target_t);

} // namespace vckit
