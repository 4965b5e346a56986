#include "hinm/encoding.hpp"

#include <string>

namespace hinm {

HiNMEncoding encode(const DenseMatrix& w, const MaskPair& masks, const GyroPermutation& sigma) {
    if (masks.element_mask.shape() != w.shape()) {
        throw InvariantViolation("element mask shape does not match weights");
    }
    if (masks.vector_mask.rows() == 0) throw InvariantViolation("vector mask has no tiles");
    check_masks(masks, sigma, tile_survivors(masks.vector_mask, 0).size());

    const std::size_t V = masks.vector_size;
    const std::size_t M = masks.nm_group;
    HiNMEncoding enc{w.rows(), w.cols(), V, masks.nm_keep, M, sigma.sigma_o, {}};
    enc.tiles.reserve(masks.vector_mask.rows());
    for (std::size_t t = 0; t < masks.vector_mask.rows(); ++t) {
        TileEncoding tile;
        tile.vector_index = sigma.sigma_i[t];
        for (std::size_t r : tile_rows(sigma.sigma_o, V, t)) {
            std::vector<std::uint32_t> positions;
            std::vector<float> values;
            for (std::size_t g = 0; g < tile.vector_index.size(); g += M) {
                for (std::size_t p = 0; p < M; ++p) {
                    const std::size_t c = tile.vector_index[g + p];
                    if (masks.element_mask(r, c)) {
                        positions.push_back(static_cast<std::uint32_t>(p));
                        values.push_back(w(r, c));
                    }
                }
            }
            tile.nm_index.push_back(std::move(positions));
            tile.kept_values.push_back(std::move(values));
        }
        enc.tiles.push_back(std::move(tile));
    }
    return enc;
}

void check_encoding(const HiNMEncoding& enc) {
    const auto fail = [](const std::string& msg) { throw InvariantViolation(msg); };
    if (enc.vector_size == 0 || enc.nm_group == 0 || enc.nm_keep == 0 || enc.nm_keep > enc.nm_group) {
        fail("encoding pattern parameters are invalid");
    }
    if (enc.rows == 0 || enc.cols == 0 || enc.rows % enc.vector_size != 0) {
        fail("encoding rows are not a multiple of the vector size");
    }
    if (!is_permutation_of_range(enc.sigma_o, enc.rows)) fail("sigma_o is not a permutation");
    if (enc.tiles.size() != enc.rows / enc.vector_size) fail("wrong number of tiles");

    for (std::size_t t = 0; t < enc.tiles.size(); ++t) {
        const TileEncoding& tile = enc.tiles[t];
        std::vector<bool> seen(enc.cols, false);
        for (std::size_t c : tile.vector_index) {
            if (c >= enc.cols) {
                throw IndexError("tile " + std::to_string(t) + " vector index " +
                                 std::to_string(c) + " out of range");
            }
            if (seen[c]) fail("duplicate vector index in tile " + std::to_string(t));
            seen[c] = true;
        }
        if (tile.vector_index.size() % enc.nm_group != 0) {
            fail("tile " + std::to_string(t) + " survivor count is not a multiple of M");
        }
        const std::size_t per_row = tile.vector_index.size() / enc.nm_group * enc.nm_keep;
        if (tile.nm_index.size() != enc.vector_size || tile.kept_values.size() != enc.vector_size) {
            fail("tile " + std::to_string(t) + " must carry one index row per output row");
        }
        for (std::size_t r = 0; r < enc.vector_size; ++r) {
            const auto& idx = tile.nm_index[r];
            if (idx.size() != per_row || tile.kept_values[r].size() != per_row) {
                fail("tile " + std::to_string(t) + " row " + std::to_string(r) +
                     " has the wrong number of kept entries");
            }
            for (std::size_t i = 0; i < idx.size(); ++i) {
                if (idx[i] >= enc.nm_group) fail("nm index position out of range");
                if (i % enc.nm_keep != 0 && idx[i] <= idx[i - 1]) {
                    fail("nm index positions must be strictly increasing within a group");
                }
            }
        }
    }
}

DenseMatrix decode(const HiNMEncoding& enc) {
    check_encoding(enc);
    DenseMatrix out(enc.rows, enc.cols, 0.0f);
    const std::size_t M = enc.nm_group;
    const std::size_t N = enc.nm_keep;
    for (std::size_t t = 0; t < enc.tiles.size(); ++t) {
        const TileEncoding& tile = enc.tiles[t];
        for (std::size_t r = 0; r < enc.vector_size; ++r) {
            const std::size_t out_row = t * enc.vector_size + r;
            for (std::size_t i = 0; i < tile.nm_index[r].size(); ++i) {
                const std::size_t group = i / N;
                const std::size_t col = tile.vector_index[group * M + tile.nm_index[r][i]];
                out(out_row, col) = tile.kept_values[r][i];
            }
        }
    }
    return out;
}

DenseMatrix decode(const HiNMEncoding& enc, Shape shape) {
    if (enc.shape() != shape) {
        throw ShapeMismatch("encoding is " + to_string(enc.shape()) + ", expected " +
                            to_string(shape));
    }
    return decode(enc);
}

}  // namespace hinm
