#include "vckit/decoder.hpp"

#include "vckit/errors.hpp"
#include "vckit/rng.hpp"

#include <cmath>

namespace vckit {

std::vector<Tensor> DecoderWeights::params() const {
    std::vector<Tensor> out = {proj_w, proj_b};
    for (const auto &l : layers) {
        out.push_back(l.w);
        out.push_back(l.b);
        out.push_back(l.ln_gain);
        out.push_back(l.ln_bias);
    }
    return out;
}

void DecoderWeights::set_requires_grad(bool on) {
    proj_w.node()->requires_grad = on;
    proj_b.node()->requires_grad = on;
    for (auto &l : layers) {
        l.w.node()->requires_grad = on;
        l.b.node()->requires_grad = on;
        l.ln_gain.node()->requires_grad = on;
        l.ln_bias.node()->requires_grad = on;
    }
}

std::vector<int> default_decoder_strides() { return {2, 4, 5, 6}; }
std::vector<int> default_decoder_channels() { return {192, 128, 64, 1}; }

DecoderWeights init_decoder(int f_dim, const std::vector<int> &strides,
                            const std::vector<int> &channels, uint64_t seed) {
    if (strides.size() != channels.size() || strides.empty())
        throw ParamError("decoder needs matching stride/channel lists");
    if (channels.back() != 1)
        throw ParamError("decoder must end in one waveform channel");
    Pcg32 rng(stage_seed(seed, "decoder"));

    DecoderWeights w;
    {
        const double limit = std::sqrt(6.0 / f_dim);
        std::vector<double> proj(static_cast<size_t>(f_dim) * f_dim);
        for (double &v : proj)
            v = rng.uniform(-limit, limit);
        w.proj_w = Tensor::from_data({f_dim, f_dim}, std::move(proj));
        w.proj_b = Tensor::zeros({f_dim});
    }

    int cin = f_dim;
    for (size_t i = 0; i < strides.size(); ++i) {
        const int stride = strides[i];
        const int cout = channels[i];
        if (stride <= 0 || cout <= 0)
            throw ParamError("decoder strides and channels must be positive");
        const int kernel = 2 * stride;
        const double limit = std::sqrt(6.0 / (kernel * cin));
        std::vector<double> data(static_cast<size_t>(cout) * kernel * cin);
        for (double &v : data)
            v = rng.uniform(-limit, limit);
        ConvLayerWeights l;
        l.w = Tensor::from_data({cout, kernel, cin}, std::move(data));
        l.b = Tensor::zeros({cout});
        l.ln_gain = Tensor::from_data({cout}, std::vector<double>(static_cast<size_t>(cout), 1.0));
        l.ln_bias = Tensor::zeros({cout});
        l.stride = stride;
        w.layers.push_back(std::move(l));
        cin = cout;
    }
    return w;
}

Tensor toy_decode_graph(const Tensor &h, const Tensor &h_p, const DecoderWeights &weights) {
    if (h.rank() != 2 || h_p.rank() != 2 || h.dim(0) != h_p.dim(0))
        throw ParamError("toy_decode: h and h_p must share T");
    if (h_p.dim(1) != weights.proj_w.dim(0) || h.dim(1) != weights.proj_w.dim(1))
        throw ParamError("toy_decode: projection shape mismatch");

    Tensor x = add(h, add(matmul(h_p, weights.proj_w), weights.proj_b));
    for (size_t i = 0; i < weights.layers.size(); ++i) {
        const auto &l = weights.layers[i];
        x = conv1d_transpose(x, l.w, l.b, l.stride);
        if (i + 1 < weights.layers.size()) {
            x = layer_norm_lastdim(x);
            x = add(mul(x, l.ln_gain), l.ln_bias);
            x = relu(x);
        }
    }
    x = tanh_t(x);
    return reshape(x, {x.dim(0)});
}

AudioBuffer toy_decode(const FeatureMatrix &h, const FeatureMatrix &h_p,
                       const DecoderWeights &weights, int sample_rate) {
    Tensor wave = toy_decode_graph(to_tensor(h), to_tensor(h_p), weights);
    AudioBuffer out;
    out.sample_rate = sample_rate;
    out.samples = wave.values();
    return out;
}

} // namespace vckit
