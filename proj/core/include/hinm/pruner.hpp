#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "hinm/config.hpp"
#include "hinm/matrix.hpp"
#include "hinm/permutation.hpp"

namespace hinm {

/// Vector-level and element-level keep masks of one HiNM-pruned layer.
///
/// `vector_mask` has one row per tile; tile t covers the output rows
/// sigma_o[t*V .. t*V+V) and its entries are indexed by original column id.
/// `element_mask` is indexed by original (row, column).
struct MaskPair {
    std::size_t vector_size = 0;
    std::size_t nm_keep = 0;
    std::size_t nm_group = 0;
    BoolMatrix vector_mask;
    BoolMatrix element_mask;

    friend bool operator==(const MaskPair&, const MaskPair&) = default;
};

SaliencyMatrix magnitude_saliency(const DenseMatrix& w);

/// Reads an HNMW score file. Throws ShapeMismatch / NegativeScore.
SaliencyMatrix load_saliency(const std::filesystem::path& path, Shape expected);

/// Original row ids of tile `tile` under `sigma_o`.
std::span<const std::size_t> tile_rows(std::span<const std::size_t> sigma_o,
                                       std::size_t vector_size, std::size_t tile);

/// Column-vector scores (sum of member saliencies) for a set of rows. Rows
/// are summed in ascending id order so the result ignores row ordering.
std::vector<double> column_vector_scores(const SaliencyMatrix& s,
                                         std::span<const std::size_t> rows);

/// Keeps the top k_v column vectors of every tile (ties: lowest column id).
BoolMatrix vector_prune(const SaliencyMatrix& s, const ValidatedConfig& cfg,
                        std::span<const std::size_t> sigma_o);

/// Surviving column ids of one tile, ascending.
std::vector<std::size_t> tile_survivors(const BoolMatrix& vector_mask, std::size_t tile);

/// Keeps N of every M consecutive survivors (in sigma_i order) per row.
/// Throws GroupingError if a tile's survivor count is not a multiple of M and
/// InvariantViolation if sigma_i^t is not an ordering of the tile's survivors.
BoolMatrix nm_prune(const SaliencyMatrix& s, const BoolMatrix& vector_mask,
                    const ValidatedConfig& cfg, const GyroPermutation& sigma);

/// sigma_o as given plus each tile's survivors in ascending order.
GyroPermutation natural_input_order(const BoolMatrix& vector_mask, Permutation sigma_o);

/// Vector pruning under sigma.sigma_o followed by N:M pruning under sigma.sigma_i.
MaskPair prune(const SaliencyMatrix& s, const ValidatedConfig& cfg, const GyroPermutation& sigma);

struct PrunedLayer {
    GyroPermutation sigma;
    MaskPair masks;
};

/// Pruning with identity output order and natural input order.
PrunedLayer prune_without_permutation(const SaliencyMatrix& s, const ValidatedConfig& cfg);

/// Hadamard product with the element mask. Throws ShapeMismatch.
DenseMatrix apply_masks(const DenseMatrix& w, const MaskPair& masks);

/// Sum of saliency over kept elements. Throws ShapeMismatch.
double retained_saliency(const SaliencyMatrix& s, const MaskPair& masks);

/// Verifies every MaskPair invariant against sigma and the per-tile keep
/// budget. Throws InvariantViolation.
void check_masks(const MaskPair& masks, const GyroPermutation& sigma,
                 std::size_t vectors_kept_per_tile);

}  // namespace hinm
