#include "vckit/prosody.hpp"

#include "vckit/errors.hpp"
#include "vckit/rng.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace vckit {

std::string ProsodyTrack::to_csv() const {
    std::ostringstream out;
    out << "frame_index,f0_hz,energy\n";
    char buf[80];
    for (size_t i = 0; i < f0.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g\n", i, f0[i], energy[i]);
        out << buf;
    }
    return out.str();
}

ProsodyTrack ProsodyTrack::from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("frame_index", 0) != 0)
        throw FormatError("prosody csv missing header");
    ProsodyTrack t;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        size_t idx;
        double hz, e;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf", &idx, &hz, &e) != 3)
            throw FormatError("bad prosody csv row: " + line);
        t.f0.push_back(hz);
        t.energy.push_back(e);
    }
    return t;
}

std::vector<double> extract_f0(const AudioBuffer &audio, const FrameConfig &config, double f_min,
                               double f_max) {
    YinParams params;
    params.f_min = f_min;
    params.f_max = f_max;
    return yin_f0(audio, config, params);
}

std::vector<double> extract_energy(const AudioBuffer &audio, const FrameConfig &config) {
    const auto frames = frame_signal_raw(audio, config);
    std::vector<double> energy(frames.size());
    for (size_t t = 0; t < frames.size(); ++t) {
        double acc = 0.0;
        for (double v : frames[t])
            acc += v * v;
        energy[t] = std::sqrt(acc / static_cast<double>(frames[t].size()));
    }
    return energy;
}

ProsodyTrack extract_prosody(const AudioBuffer &audio, const FrameConfig &config) {
    ProsodyTrack t;
    t.frame_config = config;
    t.f0 = extract_f0(audio, config);
    t.energy = extract_energy(audio, config);
    return t;
}

std::vector<double> znorm_f0(const std::vector<double> &f0) {
    double sum = 0.0;
    size_t voiced = 0;
    for (double v : f0) {
        if (v > 0.0) {
            sum += v;
            ++voiced;
        }
    }
    if (voiced == 0)
        throw ComputeError("znorm_f0: no voiced frames to normalize");
    const double mean = sum / static_cast<double>(voiced);
    double var = 0.0;
    for (double v : f0)
        if (v > 0.0)
            var += (v - mean) * (v - mean);
    const double sigma = std::sqrt(var / static_cast<double>(voiced));

    std::vector<double> out(f0.size(), 0.0);
    if (sigma < 1e-6)
        return out; // constant voiced track
    for (size_t i = 0; i < f0.size(); ++i)
        if (f0[i] > 0.0)
            out[i] = (f0[i] - mean) / sigma;
    return out;
}

FeatureMatrix cln(const FeatureMatrix &x, const SpeakerEmbedding &spk, const CLNParams &params) {
    const int C = x.cols;
    if (params.w_gamma.rows != C || params.w_beta.rows != C)
        throw ParamError("cln: weight rows must match channel count");
    if (params.w_gamma.cols != spk.dim() || params.w_beta.cols != spk.dim())
        throw ParamError("cln: weight cols must match speaker embedding dim");

    std::vector<double> gamma(static_cast<size_t>(C)), beta(static_cast<size_t>(C));
    for (int c = 0; c < C; ++c) {
        double g = 0.0, b = 0.0;
        for (int d = 0; d < spk.dim(); ++d) {
            g += params.w_gamma.at(c, d) * spk.values[static_cast<size_t>(d)];
            b += params.w_beta.at(c, d) * spk.values[static_cast<size_t>(d)];
        }
        gamma[static_cast<size_t>(c)] = g + 1.0;
        beta[static_cast<size_t>(c)] = b;
    }

    constexpr double kEps = 1e-5;
    FeatureMatrix out(x.rows, C);
    for (int t = 0; t < x.rows; ++t) {
        double mean = 0.0;
        for (int c = 0; c < C; ++c)
            mean += x.at(t, c);
        mean /= C;
        double var = 0.0;
        for (int c = 0; c < C; ++c) {
            const double d = x.at(t, c) - mean;
            var += d * d;
        }
        var /= C;
        const double inv = 1.0 / std::sqrt(var + kEps);
        for (int c = 0; c < C; ++c)
            out.at(t, c) = gamma[static_cast<size_t>(c)] * (x.at(t, c) - mean) * inv +
                           beta[static_cast<size_t>(c)];
    }
    return out;
}

ProsodyEncoderWeights identity_prosody_weights(int spk_dim) {
    ProsodyEncoderWeights w;
    w.cln.w_gamma = FeatureMatrix(1, spk_dim);
    w.cln.w_beta = FeatureMatrix(1, spk_dim);
    w.proj_w = FeatureMatrix(2, 2);
    w.proj_w.at(0, 0) = 1.0;
    w.proj_w.at(1, 1) = 1.0;
    w.proj_b = {0.0, 0.0};
    w.tanh_out = false;
    return w;
}

ProsodyEncoderWeights init_prosody_weights(int f_dim, int spk_dim, uint64_t seed) {
    ProsodyEncoderWeights w;
    w.cln.w_gamma = FeatureMatrix(1, spk_dim);
    w.cln.w_beta = FeatureMatrix(1, spk_dim);
    w.proj_w = FeatureMatrix(f_dim, 2);
    w.proj_b.assign(static_cast<size_t>(f_dim), 0.0);
    w.tanh_out = true;

    Pcg32 rng(stage_seed(seed, "prosody-weights"));
    const double cln_limit = std::sqrt(6.0 / spk_dim) * 0.1;
    for (auto &v : w.cln.w_gamma.data)
        v = rng.uniform(-cln_limit, cln_limit);
    for (auto &v : w.cln.w_beta.data)
        v = rng.uniform(-cln_limit, cln_limit);
    const double limit = std::sqrt(6.0 / 2.0);
    for (auto &v : w.proj_w.data)
        v = rng.uniform(-limit, limit);
    return w;
}

FeatureMatrix prosody_encode(const std::vector<double> &f0, const std::vector<double> &energy,
                             const SpeakerEmbedding &spk, const ProsodyEncoderWeights &weights) {
    if (f0.size() != energy.size())
        throw ParamError("prosody_encode: f0 and energy lengths differ");
    if (weights.cln.w_gamma.cols != spk.dim())
        throw ParamError("prosody_encode: speaker dim mismatch");
    if (weights.proj_w.cols != 2)
        throw ParamError("prosody_encode: projection must take the 2-channel concat");

    const int T = static_cast<int>(f0.size());
    const auto normalized = znorm_f0(f0);

    // Eq-style speaker conditioning on the single f0 channel
    double gamma = 1.0, beta = 0.0;
    for (int d = 0; d < spk.dim(); ++d) {
        gamma += weights.cln.w_gamma.at(0, d) * spk.values[static_cast<size_t>(d)];
        beta += weights.cln.w_beta.at(0, d) * spk.values[static_cast<size_t>(d)];
    }

    const int F = weights.out_dim();
    FeatureMatrix out(T, F);
    for (int t = 0; t < T; ++t) {
        const double ch0 = gamma * normalized[static_cast<size_t>(t)] + beta;
        const double ch1 = energy[static_cast<size_t>(t)];
        for (int f = 0; f < F; ++f) {
            double v = weights.proj_w.at(f, 0) * ch0 + weights.proj_w.at(f, 1) * ch1 +
                       weights.proj_b[static_cast<size_t>(f)];
            out.at(t, f) = weights.tanh_out ? std::tanh(v) : v;
        }
    }
    return out;
}

} // namespace vckit
