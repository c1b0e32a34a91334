#pragma once

#include "vckit/feature_matrix.hpp"
#include "vckit/tensor.hpp"

#include <string>
#include <utility>
#include <vector>

namespace vckit {

// Result of the prosody-queried two-way attention over {H_b, H_w}.
// weights columns are (w_b, w_w); each row sums to 1 and h_f[t] is the
// convex combination w_b*h_b[t] + w_w*h_w[t].
struct FusionOutput {
    FeatureMatrix h_f;    // T x F
    FeatureMatrix weights; // T x 2
};

// Per frame t: s_b = <h_p[t], h_b[t]> / sqrt(F), s_w = <h_p[t], h_w[t]> / sqrt(F),
// (w_b, w_w) = softmax(s_b, s_w). No learned projections; no mixing across time.
FusionOutput fuse(const FeatureMatrix &h_b, const FeatureMatrix &h_w, const FeatureMatrix &h_p);

// Graph form used by training and gradient checks: returns (h_f, weights).
std::pair<Tensor, Tensor> fuse_graph(const Tensor &h_b, const Tensor &h_w, const Tensor &h_p);

// w_b per frame, for CSV/plot emission.
std::vector<std::pair<int, double>> weight_trajectory(const FusionOutput &out);

// CSV with header "frame,w_b".
std::string weight_trajectory_csv(const FusionOutput &out);

} // namespace vckit
