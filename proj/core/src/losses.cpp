#include "vckit/losses.hpp"

#include "vckit/errors.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace vckit {

std::vector<StftResolution> default_stft_resolutions() {
    return {{512, 128, 512}, {1024, 256, 1024}, {2048, 512, 2048}};
}

Tensor stft_loss_graph(const Tensor &y, const Tensor &y_hat,
                       const std::vector<StftResolution> &resolutions) {
    if (y.shape() != y_hat.shape() || y.rank() != 1)
        throw ParamError("stft_loss: signals must be rank-1 and of equal length");
    if (resolutions.empty())
        throw ParamError("stft_loss: need at least one resolution");
    for (const auto &r : resolutions)
        if (!(r.hop <= r.win && r.win <= r.fft))
            throw ParamError("stft_loss: need hop <= win <= fft");

    Tensor total;
    for (const auto &r : resolutions) {
        Tensor s = stft_magnitude(y, r.fft, r.hop, r.win);
        Tensor s_hat = stft_magnitude(y_hat, r.fft, r.hop, r.win);
        Tensor diff = sub(s, s_hat);
        Tensor sc = div(sqrt_t(sum_all(square(diff))), sqrt_t(sum_all(square(s))));
        Tensor log_mag = mean_all(abs_t(sub(log_t(s), log_t(s_hat))));
        Tensor term = add(sc, log_mag);
        total = total.defined() ? add(total, term) : term;
    }
    return total;
}

double stft_loss(const std::vector<double> &y, const std::vector<double> &y_hat,
                 const std::vector<StftResolution> &resolutions) {
    if (y.size() != y_hat.size())
        throw ParamError("stft_loss: length mismatch");
    const int n = static_cast<int>(y.size());
    return stft_loss_graph(Tensor::from_data({n}, y), Tensor::from_data({n}, y_hat), resolutions)
        .item();
}

Tensor feature_matching_loss_graph(const std::vector<std::vector<Tensor>> &real_feats,
                                   const std::vector<std::vector<Tensor>> &fake_feats) {
    if (real_feats.size() != fake_feats.size() || real_feats.empty())
        throw ParamError("feature_matching_loss: discriminator lists must match");
    Tensor total;
    for (size_t d = 0; d < real_feats.size(); ++d) {
        if (real_feats[d].size() != fake_feats[d].size() || real_feats[d].empty())
            throw ParamError("feature_matching_loss: layer lists must match");
        Tensor per_disc;
        for (size_t l = 0; l < real_feats[d].size(); ++l) {
            if (real_feats[d][l].shape() != fake_feats[d][l].shape())
                throw ParamError("feature_matching_loss: activation shape mismatch");
            Tensor term = mean_all(abs_t(sub(real_feats[d][l], fake_feats[d][l])));
            per_disc = per_disc.defined() ? add(per_disc, term) : term;
        }
        per_disc = mul_scalar(per_disc, 1.0 / static_cast<double>(real_feats[d].size()));
        total = total.defined() ? add(total, per_disc) : per_disc;
    }
    return mul_scalar(total, 1.0 / static_cast<double>(real_feats.size()));
}

double feature_matching_loss(const std::vector<std::vector<Tensor>> &real_feats,
                             const std::vector<std::vector<Tensor>> &fake_feats) {
    return feature_matching_loss_graph(real_feats, fake_feats).item();
}

AdversarialLosses adversarial_losses_graph(const std::vector<Tensor> &d_real_outputs,
                                           const std::vector<Tensor> &d_fake_outputs) {
    if (d_real_outputs.size() != d_fake_outputs.size() || d_real_outputs.empty())
        throw ParamError("adversarial_losses: output lists must align");
    Tensor adv_g, adv_d;
    for (size_t i = 0; i < d_real_outputs.size(); ++i) {
        Tensor g_term = mean_all(square(add_scalar(d_fake_outputs[i], -1.0)));
        Tensor d_term = add(mean_all(square(add_scalar(d_real_outputs[i], -1.0))),
                            mean_all(square(d_fake_outputs[i])));
        adv_g = adv_g.defined() ? add(adv_g, g_term) : g_term;
        adv_d = adv_d.defined() ? add(adv_d, d_term) : d_term;
    }
    return {adv_g, adv_d};
}

std::pair<double, double> adversarial_losses(const std::vector<Tensor> &d_real_outputs,
                                             const std::vector<Tensor> &d_fake_outputs) {
    auto losses = adversarial_losses_graph(d_real_outputs, d_fake_outputs);
    return {losses.adv_g.item(), losses.adv_d.item()};
}

bool LossBreakdown::finite() const {
    for (double v : {adv_g, adv_d, fm, stft, total_g, total_d})
        if (!std::isfinite(v))
            return false;
    return true;
}

std::string loss_history_csv(const std::vector<LossBreakdown> &history) {
    std::ostringstream out;
    out << "step,adv_g,adv_d,fm,stft,total_g,total_d\n";
    char buf[160];
    for (size_t i = 0; i < history.size(); ++i) {
        const auto &h = history[i];
        std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", i, h.adv_g, h.adv_d,
                      h.fm, h.stft, h.total_g, h.total_d);
        out << buf;
    }
    return out.str();
}

} // namespace vckit
