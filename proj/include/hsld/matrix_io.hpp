#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "errors.hpp"
#include "field.hpp"

namespace hsld {

// HSL1 matrix file: magic "HSL1" (4 bytes), rows and cols as unsigned 32-bit
// little-endian, then rows*cols doubles (IEEE 754 binary64, little-endian,
// row-major).  Total size is 12 + 8*rows*cols bytes; write -> read is
// bit-exact.  Conventional extension: .hsld.

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back((char)((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back((char)((bits >> (8 * i)) & 0xff));
}

inline std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= (std::uint32_t)p[i] << (8 * i);
    return v;
}

inline double get_f64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= (std::uint64_t)p[i] << (8 * i);
    return std::bit_cast<double>(v);
}

}  // namespace detail

inline constexpr std::uint64_t matrix_cell_limit = 1ull << 32;

inline std::string write_matrix(const Matrix& m) {
    if (m.rows() >= matrix_cell_limit || m.cols() >= matrix_cell_limit ||
        (std::uint64_t)m.rows() * m.cols() >= matrix_cell_limit)
        throw DomainError("matrix too large for HSL1");
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!std::isfinite(m.data()[i])) throw DomainError("matrix has non-finite values");
    std::string out;
    out.reserve(12 + 8 * m.size());
    out += "HSL1";
    detail::put_u32(out, (std::uint32_t)m.rows());
    detail::put_u32(out, (std::uint32_t)m.cols());
    for (std::size_t i = 0; i < m.size(); ++i) detail::put_f64(out, m.data()[i]);
    return out;
}

inline Matrix read_matrix(const std::string& bytes) {
    if (bytes.size() < 12) throw IoError("HSL1: truncated header");
    if (std::memcmp(bytes.data(), "HSL1", 4) != 0) throw IoError("HSL1: bad magic");
    const auto* p = (const unsigned char*)bytes.data();
    const std::uint64_t rows = detail::get_u32(p + 4);
    const std::uint64_t cols = detail::get_u32(p + 8);
    if (rows * cols >= matrix_cell_limit) throw IoError("HSL1: dimension overflow");
    const std::uint64_t need = 12 + 8 * rows * cols;
    if (bytes.size() < need) throw IoError("HSL1: truncated payload");
    if (bytes.size() > need) throw IoError("HSL1: trailing data");
    Matrix m(rows, cols);
    for (std::uint64_t i = 0; i < rows * cols; ++i)
        m.data()[i] = detail::get_f64(p + 12 + 8 * i);
    return m;
}

inline void write_matrix_file(const Matrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    const auto bytes = write_matrix(m);
    out.write(bytes.data(), (std::streamsize)bytes.size());
    if (!out) throw IoError("write failed for " + path.string());
}

inline Matrix read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return read_matrix(bytes);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

}
