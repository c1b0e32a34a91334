#pragma once

#include "vckit/audio.hpp"

#include <string>

namespace vckit {

enum class WavBitDepth { pcm16, float32 };

// RIFF/WAVE reader: 16-bit integer or 32-bit float PCM, mono or stereo.
// Stereo is downmixed to mono by averaging; samples are scaled to [-1, 1].
AudioBuffer read_wav(const std::string &path);

// Writes mono WAV. Samples outside [-1, 1] are clipped with a warning on
// stderr. read_wav(write_wav(a)) is bit-exact at float32.
void write_wav(const std::string &path, const AudioBuffer &audio,
               WavBitDepth bit_depth = WavBitDepth::float32);

} // namespace vckit
