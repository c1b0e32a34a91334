#include "vckit/metrics.hpp"

#include "vckit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace vckit {

double pearson(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size())
        throw ParamError("pearson: sequences must have equal length");
    const size_t n = x.size();
    if (n < 2)
        throw ParamError("pearson: need at least 2 points");

    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw ComputeError("pearson: undefined correlation (zero variance)");
    return sxy / std::sqrt(sxx * syy);
}

CorrelationReport correlate_prosody(const ProsodyTrack &a, const ProsodyTrack &b) {
    const size_t shared = std::min(a.f0.size(), b.f0.size());
    if (shared < 2)
        throw ParamError("correlate_prosody: tracks too short");

    CorrelationReport report;
    std::vector<double> ea(a.energy.begin(), a.energy.begin() + static_cast<long>(shared));
    std::vector<double> eb(b.energy.begin(), b.energy.begin() + static_cast<long>(shared));
    report.energy_r = pearson(ea, eb);

    std::vector<double> la, lb;
    for (size_t t = 0; t < shared; ++t) {
        if (a.f0[t] > 0.0 && b.f0[t] > 0.0) {
            la.push_back(std::log(a.f0[t]));
            lb.push_back(std::log(b.f0[t]));
        }
    }
    report.n_frames_used = static_cast<int>(la.size());
    if (la.size() >= 2)
        report.lf0_r = pearson(la, lb);
    return report;
}

std::string CorrelationReport::to_string() const {
    char buf[160];
    if (lf0_r.has_value())
        std::snprintf(buf, sizeof(buf), "lf0_r = %.6f\nenergy_r = %.6f\nn_frames_used = %d\n",
                      *lf0_r, energy_r, n_frames_used);
    else
        std::snprintf(buf, sizeof(buf),
                      "lf0_r = nan (fewer than 2 jointly voiced frames)\nenergy_r = "
                      "%.6f\nn_frames_used = %d\n",
                      energy_r, n_frames_used);
    return buf;
}

} // namespace vckit
