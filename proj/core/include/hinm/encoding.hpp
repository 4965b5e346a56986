#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hinm/matrix.hpp"
#include "hinm/permutation.hpp"
#include "hinm/pruner.hpp"

namespace hinm {

/// Compressed storage of one tile (V consecutive rows in sigma_o order).
struct TileEncoding {
    /// Surviving original column ids, in sigma_i^t order.
    std::vector<std::size_t> vector_index;
    /// Per tile row: for each group of M consecutive vector_index entries, the
    /// N within-group positions of kept elements, strictly increasing.
    std::vector<std::vector<std::uint32_t>> nm_index;
    /// Per tile row: the kept values, aligned with nm_index.
    std::vector<std::vector<float>> kept_values;

    friend bool operator==(const TileEncoding&, const TileEncoding&) = default;
};

struct HiNMEncoding {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t vector_size = 0;
    std::size_t nm_keep = 0;
    std::size_t nm_group = 0;
    Permutation sigma_o;
    std::vector<TileEncoding> tiles;

    Shape shape() const noexcept { return {rows, cols}; }
    std::size_t groups_in(std::size_t tile) const {
        return tiles[tile].vector_index.size() / nm_group;
    }

    friend bool operator==(const HiNMEncoding&, const HiNMEncoding&) = default;
};

/// Packs the kept values of `w`. Throws InvariantViolation on malformed masks.
HiNMEncoding encode(const DenseMatrix& w, const MaskPair& masks, const GyroPermutation& sigma);

/// Masked-dense matrix with rows in sigma_o order and original column ids.
DenseMatrix decode(const HiNMEncoding& enc);
/// As above, throwing ShapeMismatch unless the encoding has `shape`.
DenseMatrix decode(const HiNMEncoding& enc, Shape shape);

/// Structural checks: tile count, index ranges, group sizes, nm_index order.
/// Throws IndexError for out-of-range column ids, InvariantViolation otherwise.
void check_encoding(const HiNMEncoding& enc);

}  // namespace hinm
