// Minimal RIFF/WAVE reader and writer (PCM16 and float32, mono downmix).
#pragma once

#include <iosfwd>
#include <string>

#include "warp/types.hpp"

namespace warp {

AudioSignal read_wav(std::istream& in);
AudioSignal read_wav_file(const std::string& path);

/// Writes 16-bit PCM mono.
void write_wav(std::ostream& out, const AudioSignal& sig);
void write_wav_file(const std::string& path, const AudioSignal& sig);

}  // namespace warp
