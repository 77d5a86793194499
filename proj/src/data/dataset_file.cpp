#include "dietsonar/data/dataset_file.hpp"

#include <algorithm>
#include <map>

#include "dietsonar/io/binary.hpp"

namespace dietsonar::data {

namespace {
constexpr char kMagic[4] = {'M', 'S', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_dataset(const std::string& path, const std::vector<WindowedSample>& samples) {
    if (samples.empty()) throw ArgumentError("dataset: nothing to save");
    const auto& first = samples.front();
    for (const auto& s : samples)
        if (s.n_channels != first.n_channels || s.n_bins != first.n_bins || s.n_frames != first.n_frames)
            throw ArgumentError("dataset: samples must share one tensor shape");

    std::vector<std::string> groups = group_ids(samples);
    std::map<std::string, std::uint32_t> group_index;
    for (std::size_t i = 0; i < groups.size(); ++i) group_index[groups[i]] = static_cast<std::uint32_t>(i);

    auto out = io::open_output(path);
    io::write_magic(out, kMagic);
    io::write_pod(out, kVersion);
    io::write_pod(out, static_cast<std::uint64_t>(samples.size()));
    io::write_pod(out, static_cast<std::uint32_t>(first.n_channels));
    io::write_pod(out, static_cast<std::uint32_t>(first.n_bins));
    io::write_pod(out, static_cast<std::uint32_t>(first.n_frames));

    io::write_pod(out, static_cast<std::uint32_t>(kNumClasses));
    for (int c = 0; c < kNumClasses; ++c) {
        const auto name = kClassNames[c];
        io::write_pod(out, static_cast<std::uint8_t>(c));
        io::write_pod(out, static_cast<std::uint8_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
    }
    io::write_pod(out, static_cast<std::uint32_t>(groups.size()));
    for (const auto& g : groups) {
        io::write_pod(out, static_cast<std::uint16_t>(g.size()));
        out.write(g.data(), static_cast<std::streamsize>(g.size()));
    }

    // Index: 29 bytes per sample, offsets filled relative to the blocks base.
    const auto index_pos = out.tellp();
    const std::size_t block_bytes = first.tensor_size() * sizeof(float);
    const std::uint64_t blocks_base = static_cast<std::uint64_t>(index_pos) +
                                      samples.size() * (1 + 4 + 8 + 8 + 8);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        io::write_pod(out, static_cast<std::uint8_t>(s.label));
        io::write_pod(out, group_index.at(s.group));
        io::write_pod(out, s.start_time_s);
        io::write_pod(out, s.duration_s);
        io::write_pod(out, blocks_base + i * block_bytes);
    }
    for (const auto& s : samples) io::write_array<float>(out, {s.tensor.data(), s.tensor.size()});
    if (!out) throw DataError("dataset: write failed: " + path);
}

std::vector<WindowedSample> load_dataset(const std::string& path) {
    auto in = io::open_input(path);
    io::expect_magic(in, kMagic, "MSDS dataset");
    if (io::read_pod<std::uint32_t>(in, "version") != kVersion)
        throw FormatError("MSDS dataset: unsupported version");
    const auto n = io::read_pod<std::uint64_t>(in, "n_samples");
    const auto n_channels = io::read_pod<std::uint32_t>(in, "n_channels");
    const auto n_bins = io::read_pod<std::uint32_t>(in, "n_bins");
    const auto n_frames = io::read_pod<std::uint32_t>(in, "n_frames");
    if (n == 0 || n_channels == 0 || n_bins == 0 || n_frames == 0)
        throw FormatError("MSDS dataset: invalid header");

    const auto n_labels = io::read_pod<std::uint32_t>(in, "label table size");
    if (n_labels != static_cast<std::uint32_t>(kNumClasses))
        throw FormatError("MSDS dataset: unexpected label table");
    for (std::uint32_t i = 0; i < n_labels; ++i) {
        io::read_pod<std::uint8_t>(in, "label id");
        const auto len = io::read_pod<std::uint8_t>(in, "label name length");
        std::string name(len, '\0');
        io::read_array<char>(in, {name.data(), name.size()}, "label name");
        activity_from_string(name);  // must be a known class
    }
    const auto n_groups = io::read_pod<std::uint32_t>(in, "group table size");
    std::vector<std::string> groups(n_groups);
    for (auto& g : groups) {
        const auto len = io::read_pod<std::uint16_t>(in, "group name length");
        g.assign(len, '\0');
        io::read_array<char>(in, {g.data(), g.size()}, "group name");
    }

    struct IndexEntry {
        std::uint8_t label;
        std::uint32_t group;
        double start_time;
        double duration;
        std::uint64_t offset;
    };
    std::vector<IndexEntry> index(static_cast<std::size_t>(n));
    for (auto& e : index) {
        e.label = io::read_pod<std::uint8_t>(in, "sample label");
        e.group = io::read_pod<std::uint32_t>(in, "sample group");
        e.start_time = io::read_pod<double>(in, "sample start time");
        e.duration = io::read_pod<double>(in, "sample duration");
        e.offset = io::read_pod<std::uint64_t>(in, "sample offset");
        if (e.label >= kNumClasses || e.group >= n_groups)
            throw FormatError("MSDS dataset: corrupt index entry");
    }

    std::vector<WindowedSample> samples(static_cast<std::size_t>(n));
    const std::size_t tensor_size = static_cast<std::size_t>(n_channels) * n_bins * n_frames;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto& s = samples[i];
        s.n_channels = static_cast<int>(n_channels);
        s.n_bins = static_cast<int>(n_bins);
        s.n_frames = static_cast<int>(n_frames);
        s.label = static_cast<ActivityClass>(index[i].label);
        s.group = groups[index[i].group];
        s.start_time_s = index[i].start_time;
        s.duration_s = index[i].duration;
        s.tensor.resize(tensor_size);
        in.seekg(static_cast<std::streamoff>(index[i].offset));
        io::read_array<float>(in, {s.tensor.data(), s.tensor.size()}, "sample tensor");
    }
    return samples;
}

}  // namespace dietsonar::data
