#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "hinm/hnmw.hpp"
#include "hinm/pruner.hpp"
#include "test_support.hpp"

namespace hinm {
namespace {

TEST(Hnmw, HeaderLayoutIsLittleEndian) {
    const DenseMatrix m = DenseMatrix::from_rows({{1.0f, -2.0f, 0.5f}});
    const auto bytes = encode_hnmw(m);
    ASSERT_EQ(bytes.size(), 16u + 12u);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "HNMW");
    EXPECT_EQ(bytes[4], 1);  // version
    EXPECT_EQ(bytes[8], 1);  // rows
    EXPECT_EQ(bytes[12], 3); // cols
    // 1.0f = 0x3f800000
    EXPECT_EQ(bytes[16], 0x00);
    EXPECT_EQ(bytes[19], 0x3f);
}

TEST(Hnmw, RoundTripsBitExactly) {
    const auto m = testing::random_matrix(7, 5, 3);
    EXPECT_EQ(decode_hnmw(encode_hnmw(m)), m);
}

TEST(Hnmw, RejectsMalformedInput) {
    auto bytes = encode_hnmw(DenseMatrix(2, 2, 1.0f));
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_THROW(decode_hnmw(bad_magic), FormatError);
    auto bad_version = bytes;
    bad_version[4] = 2;
    EXPECT_THROW(decode_hnmw(bad_version), FormatError);
    auto truncated = bytes;
    truncated.pop_back();
    EXPECT_THROW(decode_hnmw(truncated), FormatError);
    EXPECT_THROW(decode_hnmw(std::span(bytes).first(8)), FormatError);
}

TEST(Hnmw, RejectsNonFiniteValues) {
    DenseMatrix m(2, 2, 1.0f);
    m(1, 0) = std::numeric_limits<float>::quiet_NaN();
    EXPECT_THROW(decode_hnmw(encode_hnmw(m)), FormatError);
    m(1, 0) = std::numeric_limits<float>::infinity();
    EXPECT_THROW(decode_hnmw(encode_hnmw(m)), FormatError);
}

TEST(Hnmw, MissingFileIsFileError) {
    EXPECT_THROW(read_hnmw("/nonexistent/dir/w.hnmw"), FileError);
}

TEST(LoadSaliency, AcceptsMatchingShape) {
    const auto dir = testing::scratch_dir("saliency_ok");
    const DenseMatrix scores = DenseMatrix::from_rows({{1, 2}, {3, 4}});
    write_hnmw(dir / "s.hnmw", scores);
    const auto s = load_saliency(dir / "s.hnmw", {2, 2});
    EXPECT_DOUBLE_EQ(s(1, 0), 3.0);
}

TEST(LoadSaliency, ShapeMismatch) {
    const auto dir = testing::scratch_dir("saliency_shape");
    write_hnmw(dir / "s.hnmw", DenseMatrix(4, 4, 1.0f));
    EXPECT_THROW(load_saliency(dir / "s.hnmw", {8, 8}), ShapeMismatch);
}

TEST(LoadSaliency, NegativeScore) {
    const auto dir = testing::scratch_dir("saliency_negative");
    DenseMatrix m(2, 2, 1.0f);
    m(0, 1) = -1.0f;
    write_hnmw(dir / "s.hnmw", m);
    EXPECT_THROW(load_saliency(dir / "s.hnmw", {2, 2}), NegativeScore);
}

}  // namespace
}  // namespace hinm
