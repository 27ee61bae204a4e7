#include "warp/wav.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace warp {
namespace {

uint32_t read_u32(std::istream& in) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), 4);
    return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 |
           uint32_t(b[3]) << 24;
}

uint16_t read_u16(std::istream& in) {
    std::array<unsigned char, 2> b{};
    in.read(reinterpret_cast<char*>(b.data()), 2);
    return uint16_t(b[0] | b[1] << 8);
}

void write_u32(std::ostream& out, uint32_t v) {
    const char b[4] = {char(v & 0xff), char(v >> 8 & 0xff), char(v >> 16 & 0xff),
                       char(v >> 24 & 0xff)};
    out.write(b, 4);
}

void write_u16(std::ostream& out, uint16_t v) {
    const char b[2] = {char(v & 0xff), char(v >> 8 & 0xff)};
    out.write(b, 2);
}

}  // namespace

AudioSignal read_wav(std::istream& in) {
    char tag[4];
    in.read(tag, 4);
    if (!in || std::memcmp(tag, "RIFF", 4) != 0)
        throw IoError("not a RIFF file");
    read_u32(in);  // riff size
    in.read(tag, 4);
    if (!in || std::memcmp(tag, "WAVE", 4) != 0)
        throw IoError("not a WAVE file");

    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t sample_rate = 0;
    std::vector<char> data;
    bool have_fmt = false, have_data = false;

    while (in.read(tag, 4)) {
        const uint32_t size = read_u32(in);
        if (std::memcmp(tag, "fmt ", 4) == 0) {
            format = read_u16(in);
            channels = read_u16(in);
            sample_rate = read_u32(in);
            read_u32(in);  // byte rate
            read_u16(in);  // block align
            bits = read_u16(in);
            if (size > 16) in.ignore(size - 16);
            have_fmt = true;
        } else if (std::memcmp(tag, "data", 4) == 0) {
            data.resize(size);
            in.read(data.data(), size);
            if (!in) throw IoError("truncated data chunk");
            have_data = true;
        } else {
            in.ignore(size + (size & 1));
        }
        if (size & 1 && std::memcmp(tag, "data", 4) == 0) in.ignore(1);
    }
    if (!have_fmt || !have_data) throw IoError("missing fmt or data chunk");
    if (channels < 1) throw IoError("zero channels");

    const bool pcm16 = format == 1 && bits == 16;
    const bool float32 = format == 3 && bits == 32;
    if (!pcm16 && !float32)
        throw IoError("unsupported codec: format tag " + std::to_string(format) +
                      ", " + std::to_string(bits) + " bits (need PCM16 or float32)");

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_count = data.size() / (bytes_per_sample * channels);

    AudioSignal sig;
    sig.sample_rate = int(sample_rate);
    sig.samples.resize(frame_count);
    for (std::size_t n = 0; n < frame_count; ++n) {
        double acc = 0.0;
        for (uint16_t c = 0; c < channels; ++c) {
            const char* p = data.data() + (n * channels + c) * bytes_per_sample;
            if (pcm16) {
                int16_t v;
                std::memcpy(&v, p, 2);
                acc += double(v) / 32768.0;
            } else {
                float v;
                std::memcpy(&v, p, 4);
                acc += double(v);
            }
        }
        sig.samples[n] = acc / channels;
    }
    return sig;
}

AudioSignal read_wav_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return read_wav(in);
}

void write_wav(std::ostream& out, const AudioSignal& sig) {
    const uint32_t data_size = uint32_t(sig.samples.size() * 2);
    out.write("RIFF", 4);
    write_u32(out, 36 + data_size);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    write_u32(out, 16);
    write_u16(out, 1);  // PCM
    write_u16(out, 1);  // mono
    write_u32(out, uint32_t(sig.sample_rate));
    write_u32(out, uint32_t(sig.sample_rate) * 2);
    write_u16(out, 2);
    write_u16(out, 16);
    out.write("data", 4);
    write_u32(out, data_size);
    for (double s : sig.samples) {
        const double clamped = std::max(-1.0, std::min(1.0, s));
        const auto v = int16_t(std::lround(clamped * 32767.0));
        write_u16(out, uint16_t(v));
    }
}

void write_wav_file(const std::string& path, const AudioSignal& sig) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_wav(out, sig);
}

}  // namespace warp
