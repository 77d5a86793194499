#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>

#include "dietsonar/errors.hpp"

namespace dietsonar::io {

// Little-endian primitive I/O on iostreams (host is little-endian; the
// formats are defined little-endian on disk).

template <typename T>
void write_pod(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const char* what) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw FormatError(std::string("unexpected end of file while reading ") + what);
    return value;
}

inline void write_magic(std::ostream& out, const char magic[4]) { out.write(magic, 4); }

inline void expect_magic(std::istream& in, const char magic[4], const char* format_name) {
    char buf[4] = {};
    in.read(buf, 4);
    if (!in || std::memcmp(buf, magic, 4) != 0)
        throw FormatError(std::string("not a ") + format_name + " file (bad magic)");
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    return out;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open for reading: " + path);
    return in;
}

template <typename T>
void write_array(std::ostream& out, std::span<const T> values) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(T)));
}

template <typename T>
void read_array(std::istream& in, std::span<T> values, const char* what) {
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(T)));
    if (!in) throw FormatError(std::string("unexpected end of file while reading ") + what);
}

}  // namespace dietsonar::io
