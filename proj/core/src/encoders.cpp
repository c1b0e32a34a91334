#include "vckit/encoders.hpp"

#include "vckit/errors.hpp"
#include "vckit/rng.hpp"

#include <cmath>

namespace vckit {

std::vector<Tensor> EncoderWeights::params() const {
    std::vector<Tensor> out;
    for (const auto &l : layers) {
        out.push_back(l.w);
        out.push_back(l.b);
        out.push_back(l.ln_gain);
        out.push_back(l.ln_bias);
    }
    return out;
}

void EncoderWeights::set_requires_grad(bool on) {
    for (auto &l : layers) {
        l.w.node()->requires_grad = on;
        l.b.node()->requires_grad = on;
        l.ln_gain.node()->requires_grad = on;
        l.ln_bias.node()->requires_grad = on;
    }
}

int EncoderWeights::out_channels() const {
    return layers.empty() ? 0 : layers.back().w.dim(0);
}

Tensor to_tensor(const FeatureMatrix &m, bool requires_grad) {
    return Tensor::from_data({m.rows, m.cols}, m.data, requires_grad);
}

FeatureMatrix to_feature_matrix(const Tensor &t) {
    if (t.rank() != 2)
        throw ParamError("to_feature_matrix expects a rank-2 tensor");
    FeatureMatrix m(t.dim(0), t.dim(1));
    m.data = t.values();
    return m;
}

namespace {

Tensor he_uniform(std::vector<int> shape, int fan_in, Pcg32 &rng) {
    const double limit = std::sqrt(6.0 / fan_in);
    size_t n = 1;
    for (int d : shape)
        n *= static_cast<size_t>(d);
    std::vector<double> data(n);
    for (double &v : data)
        v = rng.uniform(-limit, limit);
    return Tensor::from_data(std::move(shape), std::move(data));
}

ConvLayerWeights make_layer(int cin, int cout, int kernel, int stride, Pcg32 &rng) {
    ConvLayerWeights l;
    l.w = he_uniform({cout, kernel, cin}, kernel * cin, rng);
    l.b = Tensor::zeros({cout});
    l.ln_gain = Tensor::from_data({cout}, std::vector<double>(static_cast<size_t>(cout), 1.0));
    l.ln_bias = Tensor::zeros({cout});
    l.stride = stride;
    return l;
}

} // namespace

EncoderWeights init_bnf_encoder(int d_bnf, int f_dim, uint64_t seed) {
    if (d_bnf <= 0 || f_dim <= 0)
        throw ParamError("encoder dims must be positive");
    Pcg32 rng(stage_seed(seed, "bnf-encoder"));
    EncoderWeights w;
    w.layers.push_back(make_layer(d_bnf, f_dim, 5, 1, rng));
    w.layers.push_back(make_layer(f_dim, f_dim, 5, 1, rng));
    return w;
}

std::vector<int> default_pwav_strides() { return {6, 5, 4, 2}; }
std::vector<int> paper_pwav_strides() { return {6, 5, 5, 2}; }

std::vector<int> default_pwav_channels(int f_dim) { return {64, 128, 192, f_dim}; }

EncoderWeights init_pwav_encoder(const std::vector<int> &strides,
                                 const std::vector<int> &channels, uint64_t seed) {
    if (strides.size() != channels.size() || strides.empty())
        throw ParamError("pwav encoder needs matching stride/channel lists");
    Pcg32 rng(stage_seed(seed, "pwav-encoder"));
    EncoderWeights w;
    int cin = 1;
    for (size_t i = 0; i < strides.size(); ++i) {
        const int stride = strides[i];
        if (stride <= 0 || channels[i] <= 0)
            throw ParamError("pwav encoder strides and channels must be positive");
        w.layers.push_back(make_layer(cin, channels[i], 2 * stride, stride, rng));
        cin = channels[i];
    }
    return w;
}

Tensor encoder_forward(const Tensor &x, const EncoderWeights &weights) {
    Tensor h = x;
    for (const auto &l : weights.layers) {
        h = conv1d(h, l.w, l.b, l.stride);
        h = layer_norm_lastdim(h);
        h = add(mul(h, l.ln_gain), l.ln_bias);
        h = relu(h);
    }
    return h;
}

Tensor pad_rows(const Tensor &a, int rows) {
    if (a.rank() < 1 || rows < a.dim(0))
        throw ParamError("pad_rows: target row count smaller than input");
    if (rows == a.dim(0))
        return a;
    auto an = a.node();
    const size_t row_elems = a.size() / static_cast<size_t>(a.dim(0));
    std::vector<int> shape = a.shape();
    shape[0] = rows;
    std::vector<double> out(static_cast<size_t>(rows) * row_elems, 0.0);
    std::copy(an->value.begin(), an->value.end(), out.begin());
    auto *ap = an.get();
    return Tensor([&] {
        auto node = std::make_shared<detail::TensorNode>();
        node->shape = std::move(shape);
        node->value = std::move(out);
        node->requires_grad = an->requires_grad;
        if (node->requires_grad) {
            node->parents = {an};
            node->backward_fn = [ap](detail::TensorNode &self) {
                ap->ensure_grad();
                for (size_t i = 0; i < ap->grad.size(); ++i)
                    ap->grad[i] += self.grad[i];
            };
        }
        return node;
    }());
}

Tensor bnf_encode_graph(const Tensor &bnf_aligned, const EncoderWeights &weights) {
    if (bnf_aligned.rank() != 2)
        throw ParamError("bnf_encode expects a [T,D] matrix");
    if (bnf_aligned.dim(1) != weights.layers.front().w.dim(2))
        throw ParamError("bnf_encode: weight input dim does not match BNF dim");
    return encoder_forward(bnf_aligned, weights);
}

FeatureMatrix bnf_encode(const FeatureMatrix &bnf_aligned, const EncoderWeights &weights) {
    return to_feature_matrix(bnf_encode_graph(to_tensor(bnf_aligned), weights));
}

Tensor pwav_encode_graph(const Tensor &wave, const EncoderWeights &weights, int target_frames) {
    if (wave.rank() != 1)
        throw ParamError("pwav_encode expects a rank-1 waveform");
    Tensor h = reshape(wave, {wave.dim(0), 1});
    h = encoder_forward(h, weights);
    if (target_frames > 0) {
        if (h.dim(0) > target_frames)
            h = take_rows(h, target_frames);
        else if (h.dim(0) < target_frames)
            h = pad_rows(h, target_frames);
    }
    return h;
}

FeatureMatrix pwav_encode(const AudioBuffer &audio, const EncoderWeights &weights,
                          int target_frames, const FrameConfig &grid) {
    if (audio.empty())
        throw ParamError("pwav_encode: empty audio");
    if (target_frames <= 0)
        target_frames = frame_count(audio.size(), grid.hop(audio.sample_rate));
    Tensor wave = Tensor::from_data({static_cast<int>(audio.size())}, audio.samples);
    return to_feature_matrix(pwav_encode_graph(wave, weights, target_frames));
}

} // namespace vckit
