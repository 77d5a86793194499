#include "dietsonar/data/timeline.hpp"

#include <fstream>

namespace dietsonar::data {

void save_timeline_csv(const std::string& path, const FrameTimeline& timeline) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << "second,label\n";
    for (std::size_t s = 0; s < timeline.labels.size(); ++s)
        out << s << ',' << to_string(timeline.labels[s]) << '\n';
    if (!out) throw DataError("timeline: write failed: " + path);
}

FrameTimeline load_timeline_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "second,label")
        throw FormatError("timeline CSV: missing 'second,label' header: " + path);
    FrameTimeline timeline;
    std::size_t expected_second = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw FormatError("timeline CSV: malformed row: " + line);
        std::size_t parsed = 0;
        unsigned long second = 0;
        try {
            second = std::stoul(line.substr(0, comma), &parsed);
        } catch (const std::exception&) {
            throw FormatError("timeline CSV: bad second column: " + line);
        }
        if (parsed != comma || second != expected_second)
            throw FormatError("timeline CSV: seconds must count up from 0: " + line);
        timeline.labels.push_back(activity_from_string(line.substr(comma + 1)));
        ++expected_second;
    }
    if (timeline.labels.empty()) throw FormatError("timeline CSV: no rows: " + path);
    return timeline;
}

}  // namespace dietsonar::data
