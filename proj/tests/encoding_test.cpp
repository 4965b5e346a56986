#include <gtest/gtest.h>

#include "hinm/encoding.hpp"
#include "hinm/gyro.hpp"
#include "test_support.hpp"

namespace hinm {
namespace {

ValidatedConfig make(std::size_t V, std::size_t N, std::size_t M, double sv, Shape shape,
                     std::uint64_t seed = 0) {
    HiNMConfig c;
    c.vector_size = V;
    c.nm_keep = N;
    c.nm_group = M;
    c.vector_sparsity = sv;
    c.seed = seed;
    c.ocp_max_iters = 5;
    return validate_config(c, shape);
}

TEST(Encode, FigureOneStyleEightByEight) {
    const auto w = testing::random_matrix(8, 8, 2024);
    const auto v = make(4, 2, 4, 0.5, {8, 8});
    const auto r = gyro_permute(magnitude_saliency(w), v);
    const HiNMEncoding enc = encode(w, r.masks, r.sigma);
    ASSERT_EQ(enc.tiles.size(), 2u);
    for (const auto& tile : enc.tiles) {
        EXPECT_EQ(tile.vector_index.size(), 4u);
        ASSERT_EQ(tile.nm_index.size(), 4u);
        for (std::size_t row = 0; row < 4; ++row) {
            ASSERT_EQ(tile.nm_index[row].size(), 2u);
            EXPECT_EQ(tile.kept_values[row].size(), 2u);
            EXPECT_LT(tile.nm_index[row][0], tile.nm_index[row][1]);
            for (auto p : tile.nm_index[row]) EXPECT_LT(p, 4u);
        }
    }
    EXPECT_EQ(testing::count_zeros(decode(enc)), 48u);  // 75% of 64
}

TEST(Encode, AllTrueMasksKeepEverything) {
    const auto w = testing::random_dyadic_matrix(4, 6, 1);
    const auto v = make(2, 1, 1, 0.0, {4, 6});
    const auto layer = prune_without_permutation(magnitude_saliency(w), v);
    const HiNMEncoding enc = encode(w, layer.masks, layer.sigma);
    for (std::size_t t = 0; t < 2; ++t) {
        EXPECT_EQ(enc.tiles[t].vector_index, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
        for (std::size_t r = 0; r < 2; ++r) {
            const auto row = w.row(t * 2 + r);
            EXPECT_EQ(enc.tiles[t].kept_values[r], std::vector<float>(row.begin(), row.end()));
        }
    }
    EXPECT_EQ(decode(enc), w);
}

TEST(Encode, RoundTripProperty) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t V = seed % 2 == 0 ? 4 : 2;
        const auto w = testing::random_matrix(8, 16, 300 + seed);
        const auto v = make(V, seed % 3 == 0 ? 1 : 2, 4, 0.5, {8, 16}, seed);
        const auto r = gyro_permute(magnitude_saliency(w), v);
        const HiNMEncoding enc = encode(w, r.masks, r.sigma);
        EXPECT_EQ(decode(enc, w.shape()), permute_rows(apply_masks(w, r.masks), r.sigma.sigma_o));
    }
}

TEST(Encode, RejectsMalformedMasks) {
    const auto w = testing::random_matrix(8, 8, 5);
    const auto v = make(2, 2, 4, 0.5, {8, 8});
    auto layer = prune_without_permutation(magnitude_saliency(w), v);
    layer.masks.element_mask(0, layer.sigma.sigma_i[0][0]) ^= 1;
    EXPECT_THROW(encode(w, layer.masks, layer.sigma), InvariantViolation);
}

TEST(Decode, ValidatesStructure) {
    const auto w = testing::random_matrix(4, 8, 7);
    const auto v = make(2, 2, 4, 0.5, {4, 8});
    const auto layer = prune_without_permutation(magnitude_saliency(w), v);
    const HiNMEncoding good = encode(w, layer.masks, layer.sigma);
    EXPECT_THROW(decode(good, {8, 8}), ShapeMismatch);

    auto bad_index = good;
    bad_index.tiles[0].vector_index[0] = 99;
    EXPECT_THROW(decode(bad_index), IndexError);

    auto bad_order = good;
    std::swap(bad_order.tiles[0].nm_index[0][0], bad_order.tiles[0].nm_index[0][1]);
    EXPECT_THROW(decode(bad_order), InvariantViolation);

    auto dup = good;
    dup.tiles[1].vector_index[1] = dup.tiles[1].vector_index[0];
    EXPECT_THROW(decode(dup), InvariantViolation);

    auto short_row = good;
    short_row.tiles[0].kept_values[1].pop_back();
    EXPECT_THROW(decode(short_row), InvariantViolation);
}

}  // namespace
}  // namespace hinm
