#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hinm/matrix.hpp"
#include "hinm/rational.hpp"

namespace hinm {

enum class TieBreak { lowest_index };

/// User-facing HiNM settings. Field names match the JSON config keys.
struct HiNMConfig {
    std::size_t vector_size = 4;      ///< V: rows per column vector (and per tile)
    std::size_t nm_keep = 2;          ///< N
    std::size_t nm_group = 4;         ///< M
    double vector_sparsity = 0.5;     ///< fraction of column vectors pruned per tile
    std::size_t tile_rows = 0;        ///< 0 means "same as vector_size"; any other value must equal it
    std::vector<std::size_t> ocp_sample_schedule;  ///< empty: use default_ocp_schedule
    std::size_t ocp_max_iters = 20;
    std::size_t icp_max_iters = 50;
    std::size_t icp_patience = 8;     ///< consecutive non-improving ICP iterations before stopping
    std::uint64_t seed = 0;
    TieBreak tie_break = TieBreak::lowest_index;
};

/// A config checked against a concrete weight shape, with derived counts.
struct ValidatedConfig {
    HiNMConfig config;
    Shape shape;
    std::size_t output_partitions = 0;  ///< P_o = m / V
    std::size_t tiles = 0;              ///< T = m / tile_rows
    std::size_t vectors_kept = 0;       ///< k_v, per tile
    std::size_t groups_per_tile = 0;    ///< k_v / M
    Rational vector_sparsity;           ///< exact form of config.vector_sparsity
    std::vector<std::size_t> ocp_schedule;  ///< one entry per OCP iteration

    std::size_t V() const noexcept { return config.vector_size; }
    std::size_t N() const noexcept { return config.nm_keep; }
    std::size_t M() const noexcept { return config.nm_group; }
};

/// Throws ValueError for bad ratios/fractions and DimensionError (or its
/// subclass BudgetError) when the shape cannot host the pattern.
ValidatedConfig validate_config(const HiNMConfig& cfg, Shape shape);

/// k = max(1, round(V/2 * 0.8^iter)) for each of `iters` iterations.
std::vector<std::size_t> default_ocp_schedule(std::size_t vector_size, std::size_t iters);

/// Per-tile column-vector keep budget n*(1 - s_v); throws BudgetError when it is
/// not an integer multiple of `group`.
std::size_t vector_keep_budget(std::size_t cols, Rational vector_sparsity, std::size_t group);

/// Fraction of zeroed elements: 1 - (1 - s_v) * N / M.
Rational composed_sparsity(Rational vector_sparsity, std::size_t keep, std::size_t group);
Rational composed_sparsity(double vector_sparsity, std::size_t keep, std::size_t group);

using BigInt = boost::multiprecision::cpp_int;

/// (m! / (V!^Po Po!)) * T * (n! / (M!^Pi Pi!)) with Po = T = m/V and Pi = n/M.
BigInt count_permutation_space(std::size_t rows, std::size_t cols, std::size_t vector_size,
                               std::size_t group);

/// Number of ways to split `items` into unordered groups of `group_size`.
BigInt count_balanced_groupings(std::size_t items, std::size_t group_size);

/// Decimal string with ',' thousands separators.
std::string with_thousands_separators(const BigInt& value);

}  // namespace hinm
