#include "dietsonar/io/profile_file.hpp"

#include "dietsonar/io/binary.hpp"

namespace dietsonar::io {

namespace {

constexpr char kMagic[4] = {'M', 'S', 'E', 'P'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kKindEcho = 0;
constexpr std::uint8_t kKindDifferential = 1;

void save_tensor(const std::string& path, const signal::detail::ProfileTensor& p, std::uint8_t kind) {
    if (p.n_channels <= 0 || p.n_bins <= 0 || p.n_frames <= 0)
        throw ArgumentError("profile file: empty profile");
    auto out = open_output(path);
    write_magic(out, kMagic);
    write_pod(out, kVersion);
    write_pod(out, kind);
    write_pod(out, static_cast<std::uint32_t>(p.n_channels));
    write_pod(out, static_cast<std::uint32_t>(p.n_bins));
    write_pod(out, static_cast<std::uint64_t>(p.n_frames));
    write_pod(out, p.bin_resolution_m);
    write_pod(out, static_cast<std::uint32_t>(p.frame_rate));
    for (const auto& ch : p.layout) {
        write_pod(out, static_cast<std::uint8_t>(ch.mic));
        write_pod(out, static_cast<std::uint8_t>(ch.band));
    }
    write_array<float>(out, {p.data.data(), p.data.size()});
    if (!out) throw DataError("profile file: write failed: " + path);
}

signal::detail::ProfileTensor load_tensor(const std::string& path, std::uint8_t expected_kind,
                                          const char* kind_name) {
    auto in = open_input(path);
    expect_magic(in, kMagic, "MSEP profile");
    const auto version = read_pod<std::uint32_t>(in, "version");
    if (version != kVersion) throw FormatError("MSEP profile: unsupported version");
    const auto kind = read_pod<std::uint8_t>(in, "kind");
    if (kind != expected_kind)
        throw FormatError(std::string("MSEP profile: expected a ") + kind_name + " profile");
    signal::detail::ProfileTensor p;
    p.n_channels = static_cast<int>(read_pod<std::uint32_t>(in, "n_channels"));
    p.n_bins = static_cast<int>(read_pod<std::uint32_t>(in, "n_bins"));
    p.n_frames = static_cast<std::int64_t>(read_pod<std::uint64_t>(in, "n_frames"));
    p.bin_resolution_m = read_pod<double>(in, "bin_resolution_m");
    p.frame_rate = static_cast<int>(read_pod<std::uint32_t>(in, "frame_rate"));
    if (p.n_channels <= 0 || p.n_channels > 64 || p.n_bins <= 0 || p.n_bins > 1 << 20 ||
        p.n_frames <= 0 || p.frame_rate <= 0)
        throw FormatError("MSEP profile: invalid header");
    p.layout.resize(static_cast<std::size_t>(p.n_channels));
    for (auto& ch : p.layout) {
        ch.mic = static_cast<signal::Mic>(read_pod<std::uint8_t>(in, "layout mic"));
        ch.band = read_pod<std::uint8_t>(in, "layout band");
    }
    p.data.resize(static_cast<std::size_t>(p.n_channels) * p.n_bins * p.n_frames);
    read_array<float>(in, {p.data.data(), p.data.size()}, "profile payload");
    return p;
}

}  // namespace

void save_profile(const std::string& path, const signal::EchoProfile& profile) {
    save_tensor(path, profile, kKindEcho);
}

void save_profile(const std::string& path, const signal::DifferentialEchoProfile& profile) {
    save_tensor(path, profile, kKindDifferential);
}

signal::EchoProfile load_echo_profile(const std::string& path) {
    signal::EchoProfile p;
    static_cast<signal::detail::ProfileTensor&>(p) = load_tensor(path, kKindEcho, "raw echo");
    return p;
}

signal::DifferentialEchoProfile load_differential_profile(const std::string& path) {
    signal::DifferentialEchoProfile p;
    static_cast<signal::detail::ProfileTensor&>(p) = load_tensor(path, kKindDifferential, "differential");
    return p;
}

}  // namespace dietsonar::io
