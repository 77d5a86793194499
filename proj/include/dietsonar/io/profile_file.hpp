#pragma once

#include <string>

#include "dietsonar/signal/echo_profile.hpp"

namespace dietsonar::io {

// MSEP: header (magic "MSEP", u32 version, u8 kind, u32 dims, f64 bin
// resolution, u32 frame rate, per-channel (mic, band) layout), then the
// row-major [channel][bin][frame] float32 payload.
void save_profile(const std::string& path, const signal::EchoProfile& profile);
void save_profile(const std::string& path, const signal::DifferentialEchoProfile& profile);

signal::EchoProfile load_echo_profile(const std::string& path);
signal::DifferentialEchoProfile load_differential_profile(const std::string& path);

}  // namespace dietsonar::io
