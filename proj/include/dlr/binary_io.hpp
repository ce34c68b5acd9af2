#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <type_traits>

#include "dlr/error.hpp"

namespace dlr::io {

// All on-disk formats are little-endian.
static_assert(std::endian::native == std::endian::little,
              "big-endian hosts need byte swapping here");

template <typename T>
void write_scalar(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_scalar(std::istream& in, const char* what) {
    static_assert(std::is_trivially_copyable_v<T>);
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) fail("format-error", std::string("truncated file while reading ") + what);
    return value;
}

inline void write_magic(std::ostream& out, const char magic[4]) {
    out.write(magic, 4);
}

inline void check_magic(std::istream& in, const char magic[4], const char* what) {
    char buf[4] = {};
    in.read(buf, 4);
    if (!in || std::memcmp(buf, magic, 4) != 0)
        fail("format-error", std::string("bad magic for ") + what);
}

} // namespace dlr::io
