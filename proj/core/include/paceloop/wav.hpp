#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace paceloop {

// Reads a RIFF/WAVE file; accepts only PCM, 16-bit, mono, 16000 Hz and
// normalizes to [-1,1] by dividing by 32768. Anything else raises
// Error("unsupported-format") naming every offending field; there is no
// resampling.
std::vector<float> read_wav(const std::string& path);

// Writes PCM16 mono; samples are clamped to [-1,1].
void write_wav(const std::string& path, std::span<const float> samples,
               int sample_rate_hz = 16000);

// Signed 16-bit little-endian pairs to normalized floats.
std::vector<float> decode_pcm16(std::span<const unsigned char> bytes);

}  // namespace paceloop
