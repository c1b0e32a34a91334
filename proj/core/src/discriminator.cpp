#include "vckit/discriminator.hpp"

#include "vckit/errors.hpp"
#include "vckit/rng.hpp"

#include <cmath>
#include <numeric>

namespace vckit {

void DiscriminatorConfig::validate() const {
    if (periods.empty() || scales.empty())
        throw ParamError("discriminator config needs periods and scales");
    for (size_t i = 0; i < periods.size(); ++i) {
        if (periods[i] < 2)
            throw ParamError("discriminator periods must be >= 2");
        for (size_t j = i + 1; j < periods.size(); ++j)
            if (periods[i] == periods[j])
                throw ParamError("discriminator periods must be distinct");
    }
    for (int s : scales)
        if (s < 1)
            throw ParamError("discriminator scales must be >= 1");
    for (const auto &r : stft_resolutions)
        if (!(r.hop <= r.win && r.win <= r.fft))
            throw ParamError("discriminator stft resolutions need hop <= win <= fft");
    if (base_channels < 1)
        throw ParamError("discriminator base_channels must be >= 1");
}

std::vector<Tensor> DiscriminatorWeights::params() const {
    std::vector<Tensor> out;
    for (const auto &stack : stacks)
        for (const auto &l : stack) {
            out.push_back(l.w);
            out.push_back(l.b);
        }
    return out;
}

void DiscriminatorWeights::set_requires_grad(bool on) {
    for (auto &stack : stacks)
        for (auto &l : stack) {
            l.w.node()->requires_grad = on;
            l.b.node()->requires_grad = on;
        }
}

namespace {

DiscLayer make_layer(int cin, int cout, int kernel, int stride, Pcg32 &rng) {
    const double limit = std::sqrt(6.0 / (kernel * cin));
    std::vector<double> w(static_cast<size_t>(cout) * kernel * cin);
    for (double &v : w)
        v = rng.uniform(-limit, limit);
    DiscLayer l;
    l.w = Tensor::from_data({cout, kernel, cin}, std::move(w));
    l.b = Tensor::zeros({cout});
    l.stride = stride;
    return l;
}

// 3 layers: two strided leaky-relu convs, then a 1-channel score conv
std::vector<DiscLayer> make_stack(int cin, int base, Pcg32 &rng) {
    std::vector<DiscLayer> stack;
    stack.push_back(make_layer(cin, base, 8, 4, rng));
    stack.push_back(make_layer(base, base * 2, 8, 4, rng));
    stack.push_back(make_layer(base * 2, 1, 3, 1, rng));
    return stack;
}

Tensor run_stack(Tensor h, const std::vector<DiscLayer> &stack, std::vector<Tensor> &feats) {
    for (size_t i = 0; i < stack.size(); ++i) {
        h = conv1d(h, stack[i].w, stack[i].b, stack[i].stride);
        if (i + 1 < stack.size())
            h = leaky_relu(h);
        feats.push_back(h);
    }
    return h;
}

} // namespace

DiscriminatorWeights init_discriminators(const DiscriminatorConfig &config, uint64_t seed) {
    config.validate();
    DiscriminatorWeights w;
    w.config = config;
    size_t idx = 0;
    for (int p : config.periods) {
        Pcg32 rng(stage_seed(seed, "disc-mpd", idx++));
        w.stacks.push_back(make_stack(p, config.base_channels, rng));
    }
    for (size_t i = 0; i < config.scales.size(); ++i) {
        Pcg32 rng(stage_seed(seed, "disc-msd", i));
        w.stacks.push_back(make_stack(1, config.base_channels, rng));
    }
    for (size_t i = 0; i < config.stft_resolutions.size(); ++i) {
        Pcg32 rng(stage_seed(seed, "disc-mrsd", i));
        const int bins = config.stft_resolutions[i].fft / 2 + 1;
        w.stacks.push_back(make_stack(bins, config.base_channels, rng));
    }
    return w;
}

std::vector<DiscOutput> run_discriminators(const Tensor &wave,
                                           const DiscriminatorWeights &weights) {
    if (wave.rank() != 1)
        throw ParamError("run_discriminators expects a rank-1 waveform");
    const auto &cfg = weights.config;
    std::vector<DiscOutput> outputs;
    size_t idx = 0;

    // MPD: fold the signal into [L/p, p] so each phase is a channel
    for (int p : cfg.periods) {
        const int rows = wave.dim(0) / p;
        if (rows < 1)
            throw ParamError("waveform shorter than discriminator period");
        Tensor folded = reshape(take_rows(wave, rows * p), {rows, p});
        DiscOutput out;
        out.score = run_stack(folded, weights.stacks[idx++], out.feats);
        outputs.push_back(std::move(out));
    }

    // MSD: average-pool downsampled copies
    for (int s : cfg.scales) {
        const int rows = wave.dim(0) / s;
        if (rows < 1)
            throw ParamError("waveform shorter than discriminator scale");
        Tensor x = reshape(take_rows(wave, rows * s), {rows * s, 1});
        if (s > 1)
            x = avg_pool_rows(x, s);
        DiscOutput out;
        out.score = run_stack(x, weights.stacks[idx++], out.feats);
        outputs.push_back(std::move(out));
    }

    // spectrogram branch: conv over frames with log-magnitude bins as channels
    for (const auto &r : cfg.stft_resolutions) {
        Tensor mag = stft_magnitude(wave, r.fft, r.hop, r.win);
        Tensor log_mag = log_t(mag);
        DiscOutput out;
        out.score = run_stack(log_mag, weights.stacks[idx++], out.feats);
        outputs.push_back(std::move(out));
    }
    return outputs;
}

std::vector<Tensor> scores_of(const std::vector<DiscOutput> &outputs) {
    std::vector<Tensor> scores;
    scores.reserve(outputs.size());
    for (const auto &o : outputs)
        scores.push_back(o.score);
    return scores;
}

std::vector<std::vector<Tensor>> feats_of(const std::vector<DiscOutput> &outputs) {
    std::vector<std::vector<Tensor>> feats;
    feats.reserve(outputs.size());
    for (const auto &o : outputs)
        feats.push_back(o.feats);
    return feats;
}

} // namespace vckit
