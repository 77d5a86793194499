#include "dietsonar/io/audio_file.hpp"

#include <cmath>
#include <vector>

#include "dietsonar/io/binary.hpp"

namespace dietsonar::io {

namespace {
constexpr char kMagic[4] = {'M', 'S', 'P', 'C'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kInterleaveChunk = 1 << 16;
}  // namespace

void save_audio(const std::string& path, const signal::AudioStream& stream) {
    stream.validate();
    if (stream.sample_rate != std::floor(stream.sample_rate))
        throw ArgumentError("audio file: sample_rate must be integral");
    auto out = open_output(path);
    write_magic(out, kMagic);
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint32_t>(stream.n_channels()));
    write_pod(out, static_cast<std::uint32_t>(stream.sample_rate));
    write_pod(out, static_cast<std::uint64_t>(stream.n_samples()));
    write_pod(out, std::uint64_t{0});

    const int nc = stream.n_channels();
    const std::int64_t n = stream.n_samples();
    std::vector<float> block(kInterleaveChunk * static_cast<std::size_t>(nc));
    for (std::int64_t base = 0; base < n; base += static_cast<std::int64_t>(kInterleaveChunk)) {
        const std::int64_t count = std::min<std::int64_t>(kInterleaveChunk, n - base);
        for (std::int64_t i = 0; i < count; ++i)
            for (int c = 0; c < nc; ++c)
                block[static_cast<std::size_t>(i * nc + c)] =
                    stream.channels[static_cast<std::size_t>(c)][static_cast<std::size_t>(base + i)];
        write_array<float>(out, {block.data(), static_cast<std::size_t>(count * nc)});
    }
    if (!out) throw DataError("audio file: write failed: " + path);
}

signal::AudioStream load_audio(const std::string& path) {
    auto in = open_input(path);
    expect_magic(in, kMagic, "MSPC audio");
    const auto version = read_pod<std::uint32_t>(in, "version");
    if (version != kVersion) throw FormatError("MSPC audio: unsupported version");
    const auto nc = read_pod<std::uint32_t>(in, "n_channels");
    const auto rate = read_pod<std::uint32_t>(in, "sample_rate");
    const auto n = read_pod<std::uint64_t>(in, "n_samples");
    read_pod<std::uint64_t>(in, "reserved");
    if (nc == 0 || nc > 64 || rate == 0) throw FormatError("MSPC audio: invalid header");

    signal::AudioStream stream;
    stream.sample_rate = static_cast<double>(rate);
    stream.channels.assign(nc, std::vector<float>(static_cast<std::size_t>(n)));
    std::vector<float> block(kInterleaveChunk * static_cast<std::size_t>(nc));
    for (std::uint64_t base = 0; base < n; base += kInterleaveChunk) {
        const std::uint64_t count = std::min<std::uint64_t>(kInterleaveChunk, n - base);
        read_array<float>(in, {block.data(), static_cast<std::size_t>(count * nc)}, "samples");
        for (std::uint64_t i = 0; i < count; ++i)
            for (std::uint32_t c = 0; c < nc; ++c)
                stream.channels[c][static_cast<std::size_t>(base + i)] =
                    block[static_cast<std::size_t>(i * nc + c)];
    }
    return stream;
}

}  // namespace dietsonar::io
