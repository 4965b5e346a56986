#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hinm/config.hpp"
#include "hinm/gyro.hpp"
#include "hinm/matrix.hpp"

namespace hinm {

inline constexpr std::uint64_t kEnumerationLimit = 1'000'000;

using Grouping = std::vector<std::vector<std::size_t>>;

/// Calls `visit` once per split of `items` into unordered groups of
/// `group_size`. Groups are emitted in a canonical form (each group keeps the
/// input order of its members; groups ordered by their first member).
void for_each_balanced_grouping(std::span<const std::size_t> items, std::size_t group_size,
                                const std::function<void(const Grouping&)>& visit);

struct GroupingOptimum {
    double retained = 0.0;
    Grouping grouping;  ///< witness achieving `retained`
};

/// Best vector-pruned retention over every balanced grouping of the output
/// channels. Throws SizeGuard when the grouping count exceeds `limit`.
GroupingOptimum exhaustive_ocp(const SaliencyMatrix& s, const ValidatedConfig& cfg,
                               std::uint64_t limit = kEnumerationLimit);

/// Best N:M retention of one tile over every grouping of its survivors into
/// groups of M. Throws SizeGuard / GroupingError.
GroupingOptimum exhaustive_icp(const SaliencyMatrix& s, std::span<const std::size_t> rows,
                               std::span<const std::size_t> survivors, const ValidatedConfig& cfg,
                               std::uint64_t limit = kEnumerationLimit);

struct OracleReport {
    double no_perm = 0.0;
    double gyro = 0.0;
    double oracle = 0.0;
    /// (oracle - gyro) / (oracle - no_perm), 0 when oracle == no_perm.
    double gap = 0.0;
    Grouping oracle_output_grouping;
    PruneReport gyro_report;
};

/// Exhaustive optimum of the whole pipeline (every output grouping, then the
/// best survivor grouping of each tile) against gyro_permute and no-perm.
/// Throws SizeGuard when output groupings times per-tile groupings exceed `limit`.
OracleReport oracle_gap(const SaliencyMatrix& s, const ValidatedConfig& cfg,
                        std::uint64_t limit = kEnumerationLimit);

}  // namespace hinm
