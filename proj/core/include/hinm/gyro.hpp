#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hinm/config.hpp"
#include "hinm/kmeans.hpp"
#include "hinm/matrix.hpp"
#include "hinm/permutation.hpp"
#include "hinm/pruner.hpp"
#include "hinm/report.hpp"
#include "hinm/rng.hpp"

namespace hinm {

enum class Axis { output, input };

/// Fixed-capacity group: V output channels, or M column vectors of one tile.
struct Partition {
    Axis axis = Axis::output;
    std::vector<std::size_t> members;
    std::size_t capacity = 0;
};

/// Removes exactly k uniformly chosen members from every partition and
/// returns them, one ascending list per partition. Throws CapacityError if a
/// partition holds fewer than k members.
std::vector<std::vector<std::size_t>> sample_channels(std::vector<Partition>& partitions,
                                                      std::size_t k, Rng& rng);

/// Saliency pruned if the output channels remainder ∪ candidate formed one
/// tile: total minus the top `vectors_kept` column-vector scores.
double output_assignment_cost(const SaliencyMatrix& s, std::span<const std::size_t> remainder,
                              std::span<const std::size_t> candidate, std::size_t capacity,
                              std::size_t vectors_kept);

/// Saliency pruned if the column vectors remainder ∪ candidate formed one
/// N:M group of the tile rows: per row, total minus the top N entries.
double input_assignment_cost(const SaliencyMatrix& s, std::span<const std::size_t> rows,
                             std::span<const std::size_t> remainder,
                             std::span<const std::size_t> candidate, std::size_t capacity,
                             std::size_t keep);

/// Saliency kept by vector pruning alone under sigma_o.
double vector_retained(const SaliencyMatrix& s, std::span<const std::size_t> sigma_o,
                       const ValidatedConfig& cfg);

/// Saliency kept by N:M pruning of one tile's rows with survivors in `order`.
double tile_nm_retained(const SaliencyMatrix& s, std::span<const std::size_t> rows,
                        std::span<const std::size_t> order, std::size_t keep, std::size_t group);

struct ScheduleState {
    std::size_t iteration = 0;
    std::size_t samples_per_partition = 0;
    double best_retained = 0.0;
};

/// One output-channel permutation step: sample k channels per partition,
/// cluster them into P_o balanced clusters of k, price every
/// (partition, cluster) pair, and apply the Hungarian matching when it strictly
/// beats the current arrangement. Returns the log entry of the step.
OcpLogEntry ocp_iterate(const SaliencyMatrix& s, Permutation& sigma_o, const ValidatedConfig& cfg,
                        ScheduleState& state, Rng& rng, const KMeansOptions& kmeans = {});

struct IcpResult {
    std::vector<std::size_t> order;  ///< sigma_i^t
    std::vector<double> log;         ///< retained N:M saliency, entry 0 = start
};

/// Tile-wise input-channel permutation: one vector sampled per group, no
/// clustering, Hungarian reassignment; stops after icp_max_iters iterations or
/// icp_patience consecutive iterations without improvement.
/// Throws GroupingError when the survivor count is not a multiple of M.
IcpResult icp_tile(const SaliencyMatrix& s, std::span<const std::size_t> rows,
                   std::vector<std::size_t> survivors, const ValidatedConfig& cfg, Rng& rng);

/// Greedy pairwise vector swapping between groups (ablation baseline).
IcpResult icp_tile_swaps(const SaliencyMatrix& s, std::span<const std::size_t> rows,
                         std::vector<std::size_t> survivors, const ValidatedConfig& cfg);

enum class Variant {
    full,
    v1_no_sampling_kmeans_all,  ///< OCP = one balanced k-means over all output channels
    v2_channel_swap_icp,        ///< ICP = greedy pairwise swaps instead of Hungarian
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct GyroResult {
    GyroPermutation sigma;
    MaskPair masks;
    PruneReport report;
};

/// OCP, vector pruning under sigma_o, per-tile ICP, N:M pruning. The result
/// never retains less saliency than pruning without permutation.
GyroResult gyro_permute(const SaliencyMatrix& s, const ValidatedConfig& cfg,
                        Variant variant = Variant::full);

/// Masks and report for identity permutations, in the same shape as gyro_permute.
GyroResult prune_identity(const SaliencyMatrix& s, const ValidatedConfig& cfg);

}  // namespace hinm
