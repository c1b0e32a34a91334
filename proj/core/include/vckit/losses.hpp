#pragma once

#include "vckit/tensor.hpp"

#include <string>
#include <vector>

namespace vckit {

struct StftResolution {
    int fft = 1024;
    int hop = 256;
    int win = 1024;
};

// (512,128,512), (1024,256,1024), (2048,512,2048)
std::vector<StftResolution> default_stft_resolutions();

// Sum over resolutions of spectral convergence ||S - S_hat||_F / ||S||_F
// plus the mean L1 log-magnitude distance. Zero exactly for y_hat == y.
Tensor stft_loss_graph(const Tensor &y, const Tensor &y_hat,
                       const std::vector<StftResolution> &resolutions);
double stft_loss(const std::vector<double> &y, const std::vector<double> &y_hat,
                 const std::vector<StftResolution> &resolutions);

// Mean absolute difference of per-layer discriminator activations,
// averaged over layers and discriminators.
Tensor feature_matching_loss_graph(const std::vector<std::vector<Tensor>> &real_feats,
                                   const std::vector<std::vector<Tensor>> &fake_feats);
double feature_matching_loss(const std::vector<std::vector<Tensor>> &real_feats,
                             const std::vector<std::vector<Tensor>> &fake_feats);

// Least-squares GAN, summed over discriminators:
//   adv_d = mean[(D(y)-1)^2] + mean[D(y_hat)^2]
//   adv_g = mean[(D(y_hat)-1)^2]
struct AdversarialLosses {
    Tensor adv_g;
    Tensor adv_d;
};
AdversarialLosses adversarial_losses_graph(const std::vector<Tensor> &d_real_outputs,
                                           const std::vector<Tensor> &d_fake_outputs);
std::pair<double, double> adversarial_losses(const std::vector<Tensor> &d_real_outputs,
                                             const std::vector<Tensor> &d_fake_outputs);

// Per-step loss record. total_g = adv_g + fm + stft where each component
// is already summed over the two reconstruction paths; total_d likewise
// sums adv_d over both paths.
struct LossBreakdown {
    double adv_g = 0.0;
    double adv_d = 0.0;
    double fm = 0.0;
    double stft = 0.0;
    double total_g = 0.0;
    double total_d = 0.0;

    bool finite() const;
};

// CSV: header "step,adv_g,adv_d,fm,stft,total_g,total_d".
std::string loss_history_csv(const std::vector<LossBreakdown> &history);

} // namespace vckit
