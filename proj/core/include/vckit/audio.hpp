#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace vckit {

// Mono PCM buffer. Samples are kept as doubles in [-1, 1]; write_wav clips
// (with a warning) anything that escapes the range, it never wraps.
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = 0;

    AudioBuffer() = default;
    AudioBuffer(std::vector<double> s, int sr) : samples(std::move(s)), sample_rate(sr) {}

    size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

enum class WindowKind { hann, rectangular };

WindowKind window_kind_from_string(const std::string &name);
std::string to_string(WindowKind kind);

// Shared analysis grid: 50 ms frames every 10 ms, Hann by default.
struct FrameConfig {
    double frame_len_ms = 50.0;
    double hop_ms = 10.0;
    WindowKind window = WindowKind::hann;

    int frame_len(int sample_rate) const;
    int hop(int sample_rate) const;
    void validate() const;

    bool operator==(const FrameConfig &) const = default;
};

// Window values of length n (periodic Hann).
std::vector<double> make_window(WindowKind kind, int n);

// Number of frames for a signal of `len` samples at hop `hop`:
// frames are centered at t*hop with reflection padding, so T = ceil(len/hop).
// Every per-frame feature in the library shares this count.
int frame_count(size_t len, int hop);

// Signal reflected by `pad` samples at both ends.
std::vector<double> reflect_pad(const std::vector<double> &x, int pad);

// Windowed frames on the shared grid. Frame t covers samples
// [t*hop - frame_len/2, t*hop + frame_len/2) of the reflection-padded signal.
std::vector<std::vector<double>> frame_signal(const AudioBuffer &audio, const FrameConfig &config);

// Unwindowed variant used by energy extraction.
std::vector<std::vector<double>> frame_signal_raw(const AudioBuffer &audio,
                                                  const FrameConfig &config);

double rms_error(const std::vector<double> &a, const std::vector<double> &b);

} // namespace vckit
