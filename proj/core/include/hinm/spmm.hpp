#pragma once

#include <cstddef>
#include <vector>

#include "hinm/config.hpp"
#include "hinm/encoding.hpp"
#include "hinm/gyro.hpp"
#include "hinm/matrix.hpp"
#include "hinm/rng.hpp"

namespace hinm {

/// W * X, accumulating each output in ascending inner index (double accumulator).
DenseMatrix dense_matmul(const DenseMatrix& w, const DenseMatrix& x);

/// Rows of X gathered by one tile's vector_index (the shared-memory staging
/// buffer of a tile): row q is X row vector_index[q].
DenseMatrix gather_tile_buffer(const TileEncoding& tile, const DenseMatrix& x);

/// Sparse product from the compressed encoding. Output rows follow sigma_o.
/// Throws ShapeMismatch unless X has enc.cols rows, IndexError on a bad
/// vector index.
DenseMatrix hinm_spmm(const HiNMEncoding& enc, const DenseMatrix& x);

/// Reorders a tile's vector_index by `order` (order[q] = old position placed at
/// q) and rewrites nm_index / kept_values so the same elements are kept.
/// `order` must map whole groups onto whole groups; throws InvariantViolation otherwise.
TileEncoding reorder_tile(const TileEncoding& tile, const std::vector<std::size_t>& order,
                          std::size_t keep, std::size_t group);

/// Random group-preserving vector order for a tile of `survivors` vectors:
/// groups are permuted and positions are permuted within every group.
std::vector<std::size_t> random_group_preserving_order(std::size_t survivors, std::size_t group,
                                                       Rng& rng);

struct KeptElement {
    std::size_t row;  ///< position in sigma_o order
    std::size_t col;  ///< original column id
    float value;

    friend auto operator<=>(const KeptElement&, const KeptElement&) = default;
};

/// Sorted (row, column, value) triples held by an encoding.
std::vector<KeptElement> kept_elements(const HiNMEncoding& enc);

struct ShuffleReport {
    std::size_t trials = 0;
    bool kept_sets_identical = true;
    double max_relative_error = 0.0;
    bool within_tolerance = true;
    double tolerance = 1e-5;
};

/// Shuffles every tile's vector_index `trials` times and compares the kept
/// element sets (exactly) and hinm_spmm outputs (relative tolerance).
ShuffleReport tile_shuffle_check(const HiNMEncoding& enc, const DenseMatrix& x, Rng& rng,
                                 std::size_t trials = 1, double tolerance = 1e-5);

/// Encodings of consecutive layers. Layer l+1's column ids are positions in
/// layer l's sigma_o output order (pre-permuted offline).
struct LayerChain {
    std::vector<HiNMEncoding> layers;
    bool relu = false;  ///< apply max(0, .) between layers
};

/// Runs the chain; when `restore_order` the final output rows are mapped back
/// to the last layer's original output-channel order.
DenseMatrix compose_layers(const LayerChain& chain, const DenseMatrix& x, bool restore_order = true);

struct ChainLayer {
    HiNMEncoding encoding;
    MaskPair masks;             ///< in the coordinates of the pre-permuted weights
    DenseMatrix prepermuted;    ///< weights after offline column reordering
};

/// Prunes and encodes dense layers into a chain: each layer's columns are
/// first reordered by the previous layer's sigma_o, then gyro-permuted.
std::vector<ChainLayer> build_chain(const std::vector<DenseMatrix>& weights,
                                    const HiNMConfig& cfg, bool use_permutation = true);

}  // namespace hinm
