#include "paceloop/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "paceloop/error.hpp"

namespace paceloop {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void write_u32(std::ofstream& out, std::uint32_t value) {
    const unsigned char bytes[4] = {
        static_cast<unsigned char>(value & 0xff),
        static_cast<unsigned char>((value >> 8) & 0xff),
        static_cast<unsigned char>((value >> 16) & 0xff),
        static_cast<unsigned char>((value >> 24) & 0xff),
    };
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

void write_u16(std::ofstream& out, std::uint16_t value) {
    const unsigned char bytes[2] = {
        static_cast<unsigned char>(value & 0xff),
        static_cast<unsigned char>((value >> 8) & 0xff),
    };
    out.write(reinterpret_cast<const char*>(bytes), 2);
}

}  // namespace

std::vector<float> read_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail("io-error", "cannot open WAV file '" + path + "'");
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        fail("unsupported-format", path + ": not a RIFF/WAVE file");
    }

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    std::size_t data_offset = 0, data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t size = read_u32(bytes.data() + pos + 4);
        const std::size_t body = pos + 8;
        if (body + size > bytes.size()) {
            fail("parse-error", path + ": truncated chunk '" + std::string(id, 4) + "'");
        }
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (size < 16) {
                fail("parse-error", path + ": fmt chunk too small");
            }
            format = read_u16(bytes.data() + body);
            channels = read_u16(bytes.data() + body + 2);
            rate = read_u32(bytes.data() + body + 4);
            bits = read_u16(bytes.data() + body + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data_offset = body;
            data_size = size;
        }
        pos = body + size + (size % 2);  // chunks are word-aligned
    }

    if (!have_fmt || data_offset == 0) {
        fail("parse-error", path + ": missing fmt or data chunk");
    }

    std::string mismatches;
    const auto add = [&](const std::string& text) {
        if (!mismatches.empty()) {
            mismatches += "; ";
        }
        mismatches += text;
    };
    if (format != 1) {
        add("codec " + std::to_string(format) + " != PCM");
    }
    if (channels != 1) {
        add(std::to_string(channels) + " channels != mono");
    }
    if (rate != 16000) {
        add("sample rate " + std::to_string(rate) + " != 16000");
    }
    if (bits != 16) {
        add(std::to_string(bits) + "-bit != 16-bit");
    }
    if (!mismatches.empty()) {
        fail("unsupported-format", path + ": " + mismatches);
    }

    return decode_pcm16({bytes.data() + data_offset, data_size});
}

std::vector<float> decode_pcm16(std::span<const unsigned char> bytes) {
    const std::size_t count = bytes.size() / 2;
    std::vector<float> samples(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto value = static_cast<std::int16_t>(
            static_cast<std::uint16_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8)));
        samples[i] = static_cast<float>(value) / 32768.0f;
    }
    return samples;
}

void write_wav(const std::string& path, std::span<const float> samples,
               int sample_rate_hz) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail("io-error", "cannot write WAV file '" + path + "'");
    }
    const auto data_size = static_cast<std::uint32_t>(samples.size() * 2);
    out.write("RIFF", 4);
    write_u32(out, 36 + data_size);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    write_u32(out, 16);
    write_u16(out, 1);  // PCM
    write_u16(out, 1);  // mono
    write_u32(out, static_cast<std::uint32_t>(sample_rate_hz));
    write_u32(out, static_cast<std::uint32_t>(sample_rate_hz * 2));  // byte rate
    write_u16(out, 2);   // block align
    write_u16(out, 16);  // bits
    out.write("data", 4);
    write_u32(out, data_size);
    for (const float sample : samples) {
        const float clamped = std::clamp(sample, -1.0f, 1.0f);
        const auto value = static_cast<std::int16_t>(
            std::lround(std::min(clamped * 32768.0f, 32767.0f)));
        const unsigned char bytes[2] = {
            static_cast<unsigned char>(static_cast<std::uint16_t>(value) & 0xff),
            static_cast<unsigned char>((static_cast<std::uint16_t>(value) >> 8) & 0xff),
        };
        out.write(reinterpret_cast<const char*>(bytes), 2);
    }
    if (!out) {
        fail("io-error", "failed writing WAV file '" + path + "'");
    }
}

}  // namespace paceloop
