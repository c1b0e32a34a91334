#include "vckit/fusion.hpp"

#include "vckit/encoders.hpp"
#include "vckit/errors.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace vckit {

std::pair<Tensor, Tensor> fuse_graph(const Tensor &h_b, const Tensor &h_w, const Tensor &h_p) {
    if (h_b.shape() != h_w.shape() || h_b.shape() != h_p.shape() || h_b.rank() != 2)
        throw ParamError("fuse: h_b, h_w, h_p must share one T x F shape");
    const double inv_sqrt_f = 1.0 / std::sqrt(static_cast<double>(h_b.dim(1)));

    Tensor s_b = mul_scalar(row_sums(mul(h_p, h_b)), inv_sqrt_f);
    Tensor s_w = mul_scalar(row_sums(mul(h_p, h_w)), inv_sqrt_f);
    Tensor weights = softmax_lastdim(stack_cols({s_b, s_w}));
    Tensor h_f = add(mul_cols(h_b, select_col(weights, 0)),
                     mul_cols(h_w, select_col(weights, 1)));
    return {h_f, weights};
}

FusionOutput fuse(const FeatureMatrix &h_b, const FeatureMatrix &h_w, const FeatureMatrix &h_p) {
    if (!h_b.same_shape(h_w) || !h_b.same_shape(h_p))
        throw ParamError("fuse: h_b, h_w, h_p must share one T x F shape");
    for (const auto *m : {&h_b, &h_w, &h_p})
        for (double v : m->data)
            if (!std::isfinite(v))
                throw ParamError("fuse: non-finite input feature");

    auto [h_f, weights] = fuse_graph(to_tensor(h_b), to_tensor(h_w), to_tensor(h_p));
    FusionOutput out;
    out.h_f = to_feature_matrix(h_f);
    out.weights = to_feature_matrix(weights);
    return out;
}

std::vector<std::pair<int, double>> weight_trajectory(const FusionOutput &out) {
    std::vector<std::pair<int, double>> traj;
    traj.reserve(static_cast<size_t>(out.weights.rows));
    for (int t = 0; t < out.weights.rows; ++t)
        traj.emplace_back(t, out.weights.at(t, 0));
    return traj;
}

std::string weight_trajectory_csv(const FusionOutput &out) {
    std::ostringstream csv;
    csv << "frame,w_b\n";
    char buf[48];
    for (const auto &[frame, w_b] : weight_trajectory(out)) {
        std::snprintf(buf, sizeof(buf), "%d,%.9g\n", frame, w_b);
        csv << buf;
    }
    return csv.str();
}

} // namespace vckit
