#include "vckit/biquad.hpp"

#include "vckit/errors.hpp"

#include <cmath>
#include <numbers>

namespace vckit {

BandKind band_kind_from_string(const std::string &name) {
    if (name == "peaking")
        return BandKind::peaking;
    if (name == "low_shelf")
        return BandKind::low_shelf;
    if (name == "high_shelf")
        return BandKind::high_shelf;
    throw ParamError("unknown band kind: " + name);
}

std::string to_string(BandKind kind) {
    switch (kind) {
    case BandKind::peaking:
        return "peaking";
    case BandKind::low_shelf:
        return "low_shelf";
    default:
        return "high_shelf";
    }
}

bool BiquadCoeffs::is_stable() const {
    // Jury criterion for z^2 + a1 z + a2
    return std::fabs(a2) < 1.0 && std::fabs(a1) < 1.0 + a2;
}

namespace {

struct Angles {
    double w0, cosw, sinw, alpha, amp;
};

Angles prepare(int sample_rate, double center_hz, double q, double gain_db) {
    if (sample_rate <= 0)
        throw ParamError("sample_rate must be positive");
    if (center_hz <= 0.0 || center_hz >= sample_rate / 2.0)
        throw ParamError("band center must lie below Nyquist, got " + std::to_string(center_hz) +
                         " Hz at " + std::to_string(sample_rate) + " Hz");
    if (q <= 0.0)
        throw ParamError("Q must be positive");
    Angles a;
    a.w0 = 2.0 * std::numbers::pi * center_hz / sample_rate;
    a.cosw = std::cos(a.w0);
    a.sinw = std::sin(a.w0);
    a.alpha = a.sinw / (2.0 * q);
    a.amp = std::pow(10.0, gain_db / 40.0);
    return a;
}

} // namespace

BiquadCoeffs design_peaking(int sample_rate, double center_hz, double q, double gain_db) {
    const Angles t = prepare(sample_rate, center_hz, q, gain_db);
    const double a0 = 1.0 + t.alpha / t.amp;
    BiquadCoeffs c;
    c.b0 = (1.0 + t.alpha * t.amp) / a0;
    c.b1 = (-2.0 * t.cosw) / a0;
    c.b2 = (1.0 - t.alpha * t.amp) / a0;
    c.a1 = (-2.0 * t.cosw) / a0;
    c.a2 = (1.0 - t.alpha / t.amp) / a0;
    return c;
}

BiquadCoeffs design_low_shelf(int sample_rate, double center_hz, double q, double gain_db) {
    const Angles t = prepare(sample_rate, center_hz, q, gain_db);
    const double A = t.amp;
    const double two_rt = 2.0 * std::sqrt(A) * t.alpha;
    const double a0 = (A + 1.0) + (A - 1.0) * t.cosw + two_rt;
    BiquadCoeffs c;
    c.b0 = A * ((A + 1.0) - (A - 1.0) * t.cosw + two_rt) / a0;
    c.b1 = 2.0 * A * ((A - 1.0) - (A + 1.0) * t.cosw) / a0;
    c.b2 = A * ((A + 1.0) - (A - 1.0) * t.cosw - two_rt) / a0;
    c.a1 = -2.0 * ((A - 1.0) + (A + 1.0) * t.cosw) / a0;
    c.a2 = ((A + 1.0) + (A - 1.0) * t.cosw - two_rt) / a0;
    return c;
}

BiquadCoeffs design_high_shelf(int sample_rate, double center_hz, double q, double gain_db) {
    const Angles t = prepare(sample_rate, center_hz, q, gain_db);
    const double A = t.amp;
    const double two_rt = 2.0 * std::sqrt(A) * t.alpha;
    const double a0 = (A + 1.0) - (A - 1.0) * t.cosw + two_rt;
    BiquadCoeffs c;
    c.b0 = A * ((A + 1.0) + (A - 1.0) * t.cosw + two_rt) / a0;
    c.b1 = -2.0 * A * ((A - 1.0) + (A + 1.0) * t.cosw) / a0;
    c.b2 = A * ((A + 1.0) + (A - 1.0) * t.cosw - two_rt) / a0;
    c.a1 = 2.0 * ((A - 1.0) - (A + 1.0) * t.cosw) / a0;
    c.a2 = ((A + 1.0) - (A - 1.0) * t.cosw - two_rt) / a0;
    return c;
}

BiquadCoeffs design_band(BandKind kind, int sample_rate, double center_hz, double q,
                         double gain_db) {
    switch (kind) {
    case BandKind::peaking:
        return design_peaking(sample_rate, center_hz, q, gain_db);
    case BandKind::low_shelf:
        return design_low_shelf(sample_rate, center_hz, q, gain_db);
    default:
        return design_high_shelf(sample_rate, center_hz, q, gain_db);
    }
}

std::vector<double> biquad_process(const BiquadCoeffs &c, const std::vector<double> &x) {
    std::vector<double> y(x.size());
    double s1 = 0.0, s2 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double in = x[i];
        const double out = c.b0 * in + s1;
        s1 = c.b1 * in - c.a1 * out + s2;
        s2 = c.b2 * in - c.a2 * out;
        y[i] = out;
    }
    return y;
}

} // namespace vckit
