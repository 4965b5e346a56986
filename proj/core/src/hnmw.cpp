#include "hinm/hnmw.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace hinm {
namespace {

constexpr char kMagic[4] = {'H', 'N', 'M', 'W'};
constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
    return v;
}

}  // namespace

std::vector<std::uint8_t> encode_hnmw(const DenseMatrix& m) {
    constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
    if (m.rows() > kMax || m.cols() > kMax) throw FormatError("matrix too large for HNMW");
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderBytes + 4 * m.size());
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    put_u32(out, kHnmwVersion);
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    for (float v : m.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

DenseMatrix decode_hnmw(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderBytes) throw FormatError("HNMW header truncated");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad HNMW magic");
    const std::uint32_t version = get_u32(bytes, 4);
    if (version != kHnmwVersion) {
        throw FormatError("unsupported HNMW version " + std::to_string(version));
    }
    const std::size_t rows = get_u32(bytes, 8);
    const std::size_t cols = get_u32(bytes, 12);
    if (rows == 0 || cols == 0) throw FormatError("HNMW matrix must be non-empty");
    if (bytes.size() != kHeaderBytes + 4 * rows * cols) {
        throw FormatError("HNMW payload size does not match " + to_string(Shape{rows, cols}));
    }
    DenseMatrix m(rows, cols);
    auto values = m.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = std::bit_cast<float>(get_u32(bytes, kHeaderBytes + 4 * i));
    }
    require_finite(m);
    return m;
}

DenseMatrix read_hnmw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                          std::istreambuf_iterator<char>());
    return decode_hnmw(bytes);
}

void write_hnmw(const std::filesystem::path& path, const DenseMatrix& m) {
    const auto bytes = encode_hnmw(m);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FileError("write failed for " + path.string());
}

}  // namespace hinm
