#pragma once

#include "vckit/prosody.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vckit {

// Sample Pearson correlation. Errors on length < 2 or zero variance.
double pearson(const std::vector<double> &x, const std::vector<double> &y);

struct CorrelationReport {
    std::optional<double> lf0_r; // absent when fewer than 2 jointly voiced frames
    double energy_r = 0.0;
    int n_frames_used = 0; // jointly voiced frames entering lf0_r

    std::string to_string() const; // key=value lines
};

// lf0_r over frames voiced in both tracks (natural log f0); energy_r over
// all shared frames. Tracks of different length are truncated to the shorter.
CorrelationReport correlate_prosody(const ProsodyTrack &a, const ProsodyTrack &b);

} // namespace vckit
