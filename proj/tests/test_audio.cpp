#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "vckit/audio.hpp"
#include "vckit/errors.hpp"
#include "vckit/resample.hpp"
#include "vckit/rng.hpp"
#include "vckit/wav.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

using namespace vckit;

namespace {

std::string temp_path(const std::string &name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

// hand-assembled 16-bit RIFF, independent of write_wav
void write_raw_wav16(const std::string &path, const std::vector<int16_t> &samples,
                     uint32_t sr, uint16_t channels) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    auto u32 = [&](uint32_t v) { out.write(reinterpret_cast<const char *>(&v), 4); };
    auto u16 = [&](uint16_t v) { out.write(reinterpret_cast<const char *>(&v), 2); };
    const uint32_t data_len = static_cast<uint32_t>(samples.size() * 2);
    out.write("RIFF", 4);
    u32(36 + data_len);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    u32(16);
    u16(1);
    u16(channels);
    u32(sr);
    u32(sr * 2 * channels);
    u16(static_cast<uint16_t>(2 * channels));
    u16(16);
    out.write("data", 4);
    u32(data_len);
    for (int16_t s : samples)
        out.write(reinterpret_cast<const char *>(&s), 2);
}

} // namespace

TEST_CASE("read_wav scales 16-bit samples by 2^15") {
    const auto path = temp_path("vckit_16bit.wav");
    write_raw_wav16(path, {0, 16384, -16384}, 24000, 1);
    const AudioBuffer a = read_wav(path);
    REQUIRE(a.size() == 3);
    CHECK(a.sample_rate == 24000);
    CHECK(a.samples[0] == doctest::Approx(0.0));
    CHECK(a.samples[1] == doctest::Approx(0.5));
    CHECK(a.samples[2] == doctest::Approx(-0.5));
}

TEST_CASE("read_wav averages stereo channels") {
    const auto path = temp_path("vckit_stereo.wav");
    write_raw_wav16(path, {16384, 0, -16384, 16384}, 8000, 2);
    const AudioBuffer a = read_wav(path);
    REQUIRE(a.size() == 2);
    CHECK(a.samples[0] == doctest::Approx(0.25));
    CHECK(a.samples[1] == doctest::Approx(0.0));
}

TEST_CASE("float32 wav round-trips bit-exactly") {
    AudioBuffer a;
    a.sample_rate = 24000;
    Pcg32 rng(7);
    for (int i = 0; i < 24000; ++i)
        a.samples.push_back(static_cast<double>(static_cast<float>(rng.uniform(-1.0, 1.0))));
    const auto path = temp_path("vckit_f32.wav");
    write_wav(path, a, WavBitDepth::float32);
    const AudioBuffer b = read_wav(path);
    REQUIRE(b.size() == a.size());
    CHECK(b.sample_rate == a.sample_rate);
    for (size_t i = 0; i < a.size(); ++i)
        REQUIRE(b.samples[i] == a.samples[i]);
}

TEST_CASE("16-bit round trip stays within one quantization step") {
    const AudioBuffer a = testutil::white_noise(0.5, 24000, 11, 0.9);
    const auto path = temp_path("vckit_q16.wav");
    write_wav(path, a, WavBitDepth::pcm16);
    const AudioBuffer b = read_wav(path);
    REQUIRE(b.size() == a.size());
    double max_err = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        max_err = std::max(max_err, std::fabs(a.samples[i] - b.samples[i]));
    CHECK(max_err <= std::pow(2.0, -15.0));
}

TEST_CASE("truncated header is a format error with no partial buffer") {
    const auto path = temp_path("vckit_trunc.wav");
    std::ofstream(path, std::ios::binary) << "RIFF\x10\x00\x00\x00WAV";
    CHECK_THROWS_AS(read_wav(path), FormatError);
}

TEST_CASE("unsupported codec is reported as such") {
    const auto path = temp_path("vckit_alaw.wav");
    std::ofstream out(path, std::ios::binary);
    // fmt chunk claiming A-law (format 6)
    const unsigned char hdr[] = {'R', 'I', 'F', 'F', 44, 0, 0, 0, 'W', 'A', 'V', 'E',
                                 'f', 'm', 't', ' ', 16, 0, 0, 0, 6,  0,  1, 0,
                                 0x40, 0x1f, 0, 0, 0x40, 0x1f, 0, 0, 1, 0, 8, 0,
                                 'd', 'a', 't', 'a', 4, 0, 0, 0, 0, 0, 0, 0};
    out.write(reinterpret_cast<const char *>(hdr), sizeof(hdr));
    out.close();
    CHECK_THROWS_AS(read_wav(path), UnsupportedError);
}

TEST_CASE("write_wav refuses empty buffers") {
    AudioBuffer empty;
    empty.sample_rate = 24000;
    CHECK_THROWS_AS(write_wav(temp_path("vckit_empty.wav"), empty), ParamError);
}

TEST_CASE("resample keeps a 440 Hz tone at 440 Hz") {
    const AudioBuffer a = testutil::sine(440.0, 1.0, 48000);
    const AudioBuffer b = resample(a, 24000);
    CHECK(b.sample_rate == 24000);
    CHECK(std::fabs(testutil::dominant_freq(b) - 440.0) <= testutil::bin_width_hz(b));
}

TEST_CASE("resample at the same rate is the identity") {
    const AudioBuffer a = testutil::white_noise(0.3, 24000, 3);
    const AudioBuffer b = resample(a, 24000);
    CHECK(b.samples == a.samples);
}

TEST_CASE("resample preserves duration within one output sample") {
    Pcg32 rng(99);
    const int rates[] = {8000, 16000, 22050, 24000, 44100, 48000};
    for (int i = 0; i < 10; ++i) {
        const int src = rates[rng.next_u32() % 6];
        const int dst = rates[rng.next_u32() % 6];
        AudioBuffer a = testutil::white_noise(1.0, src, 1000 + i);
        const AudioBuffer b = resample(a, dst);
        CHECK(std::llabs(static_cast<long long>(b.size()) - dst) <= 1);
    }
}

TEST_CASE("frame count is ceil(len/hop) and content independent") {
    const FrameConfig cfg;
    CHECK(frame_count(24000, 240) == 100);
    CHECK(frame_count(24001, 240) == 101);
    CHECK(frame_count(239, 240) == 1);

    const AudioBuffer tone = testutil::sine(220.0, 1.0, 24000);
    const AudioBuffer noise = testutil::white_noise(1.0, 24000, 5);
    CHECK(frame_signal(tone, cfg).size() == 100);
    CHECK(frame_signal(noise, cfg).size() == 100);
}

TEST_CASE("rectangular frames of a constant signal are all ones") {
    AudioBuffer a;
    a.sample_rate = 24000;
    a.samples.assign(24000, 1.0);
    FrameConfig cfg;
    cfg.window = WindowKind::rectangular;
    const auto frames = frame_signal(a, cfg);
    REQUIRE(frames.size() == 100);
    for (const auto &f : frames)
        for (double v : f)
            REQUIRE(v == 1.0);
}

TEST_CASE("hann frames match the elementwise product oracle") {
    const AudioBuffer a = testutil::white_noise(0.4, 24000, 21);
    FrameConfig cfg;
    const auto windowed = frame_signal(a, cfg);
    const auto raw = frame_signal_raw(a, cfg);
    const auto win = make_window(WindowKind::hann, cfg.frame_len(a.sample_rate));
    REQUIRE(windowed.size() == raw.size());
    for (size_t t = 0; t < windowed.size(); ++t)
        for (size_t i = 0; i < windowed[t].size(); ++i)
            REQUIRE(windowed[t][i] == doctest::Approx(raw[t][i] * win[i]).epsilon(1e-12));
}

TEST_CASE("fft agrees with the naive dft") {
    const auto noise = testutil::white_noise(0.01, 8000, 17);
    std::vector<double> x(noise.samples.begin(), noise.samples.begin() + 64);
    const auto fast = fft_real(x, 64);
    const auto slow = testutil::naive_dft(x);
    for (size_t k = 0; k < 64; ++k) {
        CHECK(fast[k].real() == doctest::Approx(slow[k].real()).epsilon(1e-9));
        CHECK(fast[k].imag() == doctest::Approx(slow[k].imag()).epsilon(1e-9));
    }
}
