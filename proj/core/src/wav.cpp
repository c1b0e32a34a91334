#include "vckit/wav.hpp"

#include "vckit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <vector>

namespace vckit {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;

uint32_t read_u32(const uint8_t *p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t *p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<uint8_t> &out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 24) & 0xff));
}

void put_u16(std::vector<uint8_t> &out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
}

} // namespace

AudioBuffer read_wav(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open wav file: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    if (bytes.size() < 44)
        throw FormatError("truncated wav header: " + path);
    if (std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw FormatError("not a RIFF/WAVE file: " + path);

    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t sample_rate = 0;
    const uint8_t *data = nullptr;
    size_t data_len = 0;
    bool have_fmt = false;

    size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const uint8_t *hdr = bytes.data() + pos;
        uint32_t chunk_len = read_u32(hdr + 4);
        const size_t body = pos + 8;
        if (body + chunk_len > bytes.size())
            throw FormatError("chunk overruns file: " + path);
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (chunk_len < 16)
                throw FormatError("fmt chunk too small: " + path);
            format = read_u16(bytes.data() + body);
            channels = read_u16(bytes.data() + body + 2);
            sample_rate = read_u32(bytes.data() + body + 4);
            bits = read_u16(bytes.data() + body + 14);
            have_fmt = true;
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            data = bytes.data() + body;
            data_len = chunk_len;
        }
        pos = body + chunk_len + (chunk_len & 1); // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr)
        throw FormatError("missing fmt or data chunk: " + path);
    if (channels != 1 && channels != 2)
        throw UnsupportedError("only mono/stereo wav supported, got " + std::to_string(channels) +
                               " channels: " + path);
    if (sample_rate == 0)
        throw FormatError("zero sample rate: " + path);

    const bool is_f32 = format == kFormatFloat && bits == 32;
    const bool is_i16 = format == kFormatPcm && bits == 16;
    if (!is_f32 && !is_i16)
        throw UnsupportedError("unsupported wav codec (format " + std::to_string(format) + ", " +
                               std::to_string(bits) + " bit): " + path);

    const size_t bytes_per = is_f32 ? 4 : 2;
    const size_t n_values = data_len / (bytes_per * channels);

    AudioBuffer out;
    out.sample_rate = static_cast<int>(sample_rate);
    out.samples.resize(n_values);
    for (size_t i = 0; i < n_values; ++i) {
        double acc = 0.0;
        for (uint16_t c = 0; c < channels; ++c) {
            const uint8_t *p = data + (i * channels + c) * bytes_per;
            if (is_f32) {
                uint32_t u = read_u32(p);
                float f;
                std::memcpy(&f, &u, 4);
                acc += f;
            } else {
                int16_t v = static_cast<int16_t>(read_u16(p));
                acc += static_cast<double>(v) / 32768.0;
            }
        }
        out.samples[i] = acc / channels;
    }
    return out;
}

void write_wav(const std::string &path, const AudioBuffer &audio, WavBitDepth bit_depth) {
    if (audio.empty())
        throw ParamError("refusing to write empty audio buffer: " + path);
    if (audio.sample_rate <= 0)
        throw ParamError("audio has no sample rate: " + path);

    size_t clipped = 0;
    const bool f32 = bit_depth == WavBitDepth::float32;
    const uint32_t bytes_per = f32 ? 4 : 2;
    const uint32_t data_len = static_cast<uint32_t>(audio.size() * bytes_per);

    std::vector<uint8_t> out;
    out.reserve(44 + data_len);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32(out, 36 + data_len);
    out.insert(out.end(), {'W', 'A', 'V', 'E'});
    out.insert(out.end(), {'f', 'm', 't', ' '});
    put_u32(out, 16);
    put_u16(out, f32 ? kFormatFloat : kFormatPcm);
    put_u16(out, 1); // mono
    put_u32(out, static_cast<uint32_t>(audio.sample_rate));
    put_u32(out, static_cast<uint32_t>(audio.sample_rate) * bytes_per);
    put_u16(out, static_cast<uint16_t>(bytes_per));
    put_u16(out, f32 ? 32 : 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32(out, data_len);

    for (double s : audio.samples) {
        double v = s;
        if (!std::isfinite(v))
            throw ParamError("non-finite sample while writing: " + path);
        if (v > 1.0 || v < -1.0) {
            v = std::clamp(v, -1.0, 1.0);
            ++clipped;
        }
        if (f32) {
            float fv = static_cast<float>(v);
            uint32_t u;
            std::memcpy(&u, &fv, 4);
            put_u32(out, u);
        } else {
            double scaled = v * 32768.0;
            int32_t q = static_cast<int32_t>(std::lround(scaled));
            q = std::clamp(q, -32768, 32767);
            put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
        }
    }

    if (clipped > 0)
        std::cerr << "warning: clipped " << clipped << " sample(s) writing " << path << "\n";

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw IoError("cannot open for writing: " + path);
    file.write(reinterpret_cast<const char *>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!file)
        throw IoError("write failed: " + path);
}

} // namespace vckit
