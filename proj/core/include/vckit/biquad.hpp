#pragma once

#include <string>
#include <vector>

namespace vckit {

enum class BandKind { peaking, low_shelf, high_shelf };

BandKind band_kind_from_string(const std::string &name);
std::string to_string(BandKind kind);

// Second-order section, a0 normalized to 1.
struct BiquadCoeffs {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;

    // poles of 1 + a1 z^-1 + a2 z^-2 strictly inside the unit circle
    bool is_stable() const;
};

// RBJ audio-EQ designs. gain_db = 0 yields exact identity coefficients.
BiquadCoeffs design_peaking(int sample_rate, double center_hz, double q, double gain_db);
BiquadCoeffs design_low_shelf(int sample_rate, double center_hz, double q, double gain_db);
BiquadCoeffs design_high_shelf(int sample_rate, double center_hz, double q, double gain_db);

BiquadCoeffs design_band(BandKind kind, int sample_rate, double center_hz, double q,
                         double gain_db);

// Direct-form II transposed, zero initial state.
std::vector<double> biquad_process(const BiquadCoeffs &c, const std::vector<double> &x);

} // namespace vckit
