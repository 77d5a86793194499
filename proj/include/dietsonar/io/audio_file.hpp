#pragma once

#include <string>

#include "dietsonar/signal/audio_stream.hpp"

namespace dietsonar::io {

// MSPC: 32-byte header (magic "MSPC", u32 version, u32 n_channels,
// u32 sample_rate, u64 n_samples, u64 reserved), then float32 PCM
// interleaved by channel, little-endian.
void save_audio(const std::string& path, const signal::AudioStream& stream);
signal::AudioStream load_audio(const std::string& path);

}  // namespace dietsonar::io
