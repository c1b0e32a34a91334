#include "vckit/train.hpp"

#include "vckit/bnf.hpp"
#include "vckit/errors.hpp"
#include "vckit/fft.hpp"
#include "vckit/fusion.hpp"
#include "vckit/prosody.hpp"
#include "vckit/resample.hpp"
#include "vckit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vckit {

std::vector<Tensor> ProsodyGraphWeights::params() const {
    return {w_gamma, w_beta, proj_w, proj_b};
}

void ProsodyGraphWeights::set_requires_grad(bool on) {
    for (const Tensor &t : params())
        t.node()->requires_grad = on;
}

ProsodyGraphWeights init_prosody_graph_weights(int f_dim, int spk_dim, uint64_t seed) {
    Pcg32 rng(stage_seed(seed, "prosody-graph-weights"));
    ProsodyGraphWeights w;
    const double cln_limit = std::sqrt(6.0 / spk_dim) * 0.1;
    std::vector<double> wg(static_cast<size_t>(spk_dim)), wb(static_cast<size_t>(spk_dim));
    for (auto &v : wg)
        v = rng.uniform(-cln_limit, cln_limit);
    for (auto &v : wb)
        v = rng.uniform(-cln_limit, cln_limit);
    w.w_gamma = Tensor::from_data({1, spk_dim}, std::move(wg));
    w.w_beta = Tensor::from_data({1, spk_dim}, std::move(wb));
    const double limit = std::sqrt(6.0 / 2.0);
    std::vector<double> proj(static_cast<size_t>(2) * f_dim);
    for (auto &v : proj)
        v = rng.uniform(-limit, limit);
    w.proj_w = Tensor::from_data({2, f_dim}, std::move(proj));
    w.proj_b = Tensor::zeros({f_dim});
    return w;
}

Tensor prosody_encode_graph(const std::vector<double> &znormed_f0,
                            const std::vector<double> &energy, const Tensor &spk,
                            const ProsodyGraphWeights &weights) {
    if (znormed_f0.size() != energy.size())
        throw ParamError("prosody_encode_graph: track lengths differ");
    const int T = static_cast<int>(znormed_f0.size());
    const int spk_dim = spk.dim(0);
    Tensor f0_t = Tensor::from_data({T}, znormed_f0);
    Tensor energy_t = Tensor::from_data({T}, energy);
    Tensor spk_col = reshape(spk, {spk_dim, 1});
    Tensor gamma = add_scalar(reshape(matmul(weights.w_gamma, spk_col), {1}), 1.0);
    Tensor beta = reshape(matmul(weights.w_beta, spk_col), {1});
    Tensor ch0 = add(mul(f0_t, gamma), beta);
    Tensor feats = stack_cols({ch0, energy_t});
    return tanh_t(add(matmul(feats, weights.proj_w), weights.proj_b));
}

LossBreakdown TotalLossGraphs::values() const {
    LossBreakdown v;
    v.adv_g = adv_g.item();
    v.adv_d = adv_d.item();
    v.fm = fm.item();
    v.stft = stft.item();
    v.total_g = total_g.item();
    v.total_d = total_d.item();
    return v;
}

TotalLossGraphs total_losses_graph(const Tensor &y, const Tensor &y_hat_f, const Tensor &y_hat_w,
                                   const DiscriminatorWeights &discriminators,
                                   const std::vector<StftResolution> &resolutions) {
    if (y.shape() != y_hat_f.shape() || y.shape() != y_hat_w.shape())
        throw ParamError("total_losses: the three waveforms must have equal length");

    const auto d_real = run_discriminators(y, discriminators);
    const auto real_scores = scores_of(d_real);
    const auto real_feats = feats_of(d_real);

    TotalLossGraphs out;
    for (const Tensor *y_hat : {&y_hat_f, &y_hat_w}) {
        const auto d_fake = run_discriminators(*y_hat, discriminators);
        auto adv = adversarial_losses_graph(real_scores, scores_of(d_fake));
        Tensor fm = feature_matching_loss_graph(real_feats, feats_of(d_fake));
        Tensor stft = stft_loss_graph(y, *y_hat, resolutions);

        out.adv_g = out.adv_g.defined() ? add(out.adv_g, adv.adv_g) : adv.adv_g;
        out.adv_d = out.adv_d.defined() ? add(out.adv_d, adv.adv_d) : adv.adv_d;
        out.fm = out.fm.defined() ? add(out.fm, fm) : fm;
        out.stft = out.stft.defined() ? add(out.stft, stft) : stft;
    }
    out.total_g = add(add(out.adv_g, out.fm), out.stft);
    out.total_d = out.adv_d;
    return out;
}

LossBreakdown total_losses(const AudioBuffer &y, const AudioBuffer &y_hat_f,
                           const AudioBuffer &y_hat_w,
                           const DiscriminatorWeights &discriminators,
                           const std::vector<StftResolution> &resolutions) {
    const int n = static_cast<int>(y.size());
    return total_losses_graph(Tensor::from_data({n}, y.samples),
                              Tensor::from_data({static_cast<int>(y_hat_f.size())}, y_hat_f.samples),
                              Tensor::from_data({static_cast<int>(y_hat_w.size())}, y_hat_w.samples),
                              discriminators, resolutions)
        .values();
}

namespace {

// Stand-in for file-ingested BNFs during smoke training: band-averaged
// log-magnitude STFT on the shared frame grid.
FeatureMatrix pseudo_bnf(const AudioBuffer &y, int d_bnf, int target_t) {
    const int win = std::min<int>(1200, static_cast<int>(y.size()));
    const int hop = 240;
    const int fft = next_pow2(win);
    const int frames = 1 + (static_cast<int>(y.size()) - win) / hop;
    const int bins = fft / 2 + 1;

    BnfMatrix raw;
    raw.values = FeatureMatrix(frames, d_bnf);
    std::vector<double> frame(static_cast<size_t>(win));
    const auto window = make_window(WindowKind::hann, win);
    for (int f = 0; f < frames; ++f) {
        for (int i = 0; i < win; ++i)
            frame[static_cast<size_t>(i)] =
                y.samples[static_cast<size_t>(f * hop + i)] * window[static_cast<size_t>(i)];
        const auto mag = magnitude_spectrum(frame, fft);
        for (int d = 0; d < d_bnf; ++d) {
            const int lo = d * bins / d_bnf;
            const int hi = std::max(lo + 1, (d + 1) * bins / d_bnf);
            double acc = 0.0;
            for (int k = lo; k < hi; ++k)
                acc += std::log(mag[static_cast<size_t>(k)] + 1e-9);
            raw.values.at(f, d) = acc / (hi - lo);
        }
    }
    return align_bnf(raw, target_t);
}

struct TrainExample {
    std::vector<double> wave;
    std::vector<double> perturbed;
    FeatureMatrix bnf;
    std::vector<double> znormed_f0;
    std::vector<double> energy;
    int frames = 0;
};

TrainExample make_example(const AudioBuffer &clip, const SmokeTrainConfig &cfg, uint64_t sub_seed) {
    TrainExample ex;
    ex.wave = clip.samples;
    const PerturbConfig pc =
        sample_perturb_config(sub_seed, cfg.sample_rate, cfg.perturb_ranges);
    ex.perturbed = perturb(clip, pc).samples;
    const FrameConfig grid;
    ex.frames = frame_count(clip.size(), grid.hop(cfg.sample_rate));
    ex.bnf = pseudo_bnf(clip, cfg.d_bnf, ex.frames);
    const auto f0 = extract_f0(clip, grid);
    try {
        ex.znormed_f0 = znorm_f0(f0);
    } catch (const ComputeError &) {
        ex.znormed_f0.assign(f0.size(), 0.0); // unvoiced clip
    }
    ex.energy = extract_energy(clip, grid);
    return ex;
}

void sgd_step(const std::vector<Tensor> &params, double lr) {
    for (const Tensor &p : params) {
        auto node = p.node();
        if (node->grad.size() != node->value.size())
            continue;
        for (size_t i = 0; i < node->value.size(); ++i)
            node->value[i] -= lr * node->grad[i];
        node->grad.assign(node->value.size(), 0.0);
    }
}

void clear_grads(const std::vector<Tensor> &params) {
    for (const Tensor &p : params)
        p.node()->grad.assign(p.size(), 0.0);
}

} // namespace

std::vector<LossBreakdown> smoke_train(const std::vector<AudioBuffer> &clips,
                                       const SmokeTrainConfig &cfg) {
    if (cfg.steps < 1)
        throw ParamError("smoke_train: steps must be >= 1");
    if (clips.empty())
        throw ParamError("smoke_train: need at least one clip");
    if (cfg.enc_channels.empty() || cfg.enc_channels.back() != cfg.f_dim)
        throw ParamError("smoke_train: last encoder channel must equal f_dim");

    // dataset: original and speed-augmented variant per clip
    std::vector<TrainExample> examples;
    Pcg32 speed_rng(stage_seed(cfg.seed, "speed"));
    for (size_t i = 0; i < clips.size(); ++i) {
        AudioBuffer clip =
            clips[i].sample_rate == cfg.sample_rate ? clips[i] : resample(clips[i], cfg.sample_rate);
        if (clip.duration_s() < 0.5)
            throw ParamError("smoke_train: clips must be at least 0.5 s");
        examples.push_back(make_example(clip, cfg, stage_seed(cfg.seed, "perturb-orig", i)));
        const double factor = speed_rng.uniform(cfg.speed_lo, cfg.speed_hi);
        examples.push_back(make_example(speed_augment(clip, factor), cfg,
                                        stage_seed(cfg.seed, "perturb-aug", i)));
    }

    EncoderWeights bnf_enc = init_bnf_encoder(cfg.d_bnf, cfg.f_dim, stage_seed(cfg.seed, "g"));
    EncoderWeights pwav_enc =
        init_pwav_encoder(cfg.enc_strides, cfg.enc_channels, stage_seed(cfg.seed, "g"));
    ProsodyGraphWeights prosody =
        init_prosody_graph_weights(cfg.f_dim, cfg.spk_dim, stage_seed(cfg.seed, "g"));
    DecoderWeights decoder = init_decoder(cfg.f_dim, cfg.dec_strides, cfg.dec_channels,
                                          stage_seed(cfg.seed, "g"));
    DiscriminatorWeights discs = init_discriminators(cfg.discriminators, stage_seed(cfg.seed, "d"));

    Pcg32 spk_rng(stage_seed(cfg.seed, "speaker"));
    std::vector<double> spk_data(static_cast<size_t>(cfg.spk_dim));
    for (auto &v : spk_data)
        v = spk_rng.uniform(-1.0, 1.0);
    const Tensor spk = Tensor::from_data({cfg.spk_dim}, spk_data);

    std::vector<Tensor> g_params;
    for (const auto &set : {bnf_enc.params(), pwav_enc.params(), prosody.params(),
                            decoder.params()})
        g_params.insert(g_params.end(), set.begin(), set.end());
    const std::vector<Tensor> d_params = discs.params();

    auto set_g = [&](bool on) {
        bnf_enc.set_requires_grad(on);
        pwav_enc.set_requires_grad(on);
        prosody.set_requires_grad(on);
        decoder.set_requires_grad(on);
    };

    auto forward_paths = [&](const TrainExample &ex, Tensor &y, Tensor &y_hat_f, Tensor &y_hat_w) {
        const int n = static_cast<int>(ex.wave.size());
        y = Tensor::from_data({n}, ex.wave);
        Tensor pert = Tensor::from_data({static_cast<int>(ex.perturbed.size())}, ex.perturbed);
        Tensor h_b = bnf_encode_graph(to_tensor(ex.bnf), bnf_enc);
        Tensor h_w = pwav_encode_graph(pert, pwav_enc, ex.frames);
        Tensor h_p = prosody_encode_graph(ex.znormed_f0, ex.energy, spk, prosody);
        Tensor h_f = fuse_graph(h_b, h_w, h_p).first;
        y_hat_f = take_rows(toy_decode_graph(h_f, h_p, decoder), n);
        // auxiliary path: bypass fusion, H_w and H_p added directly
        y_hat_w = take_rows(toy_decode_graph(h_w, h_p, decoder), n);
    };

    std::vector<LossBreakdown> history;
    history.reserve(static_cast<size_t>(cfg.steps));
    for (int step = 0; step < cfg.steps; ++step) {
        const TrainExample &ex = examples[static_cast<size_t>(step) % examples.size()];

        // discriminator phase: generator detached
        {
            set_g(false);
            discs.set_requires_grad(true);
            Tensor y, y_hat_f, y_hat_w;
            forward_paths(ex, y, y_hat_f, y_hat_w);
            auto losses = total_losses_graph(y, y_hat_f, y_hat_w, discs, cfg.loss_resolutions);
            if (!std::isfinite(losses.total_d.item()))
                throw ComputeError("smoke_train diverged (total_d) at step " +
                                   std::to_string(step));
            clear_grads(d_params);
            losses.total_d.backward();
            sgd_step(d_params, cfg.learning_rate);
        }

        // generator phase against the updated discriminators
        {
            set_g(true);
            discs.set_requires_grad(false);
            Tensor y, y_hat_f, y_hat_w;
            forward_paths(ex, y, y_hat_f, y_hat_w);
            auto losses = total_losses_graph(y, y_hat_f, y_hat_w, discs, cfg.loss_resolutions);
            const LossBreakdown entry = losses.values();
            if (!entry.finite())
                throw ComputeError("smoke_train diverged at step " + std::to_string(step));
            clear_grads(g_params);
            losses.total_g.backward();
            sgd_step(g_params, cfg.learning_rate);
            history.push_back(entry);
        }
    }
    return history;
}

} // namespace vckit
