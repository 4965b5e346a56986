#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hinm {

/// order[p] is the original index placed at position p.
using Permutation = std::vector<std::size_t>;

Permutation identity_permutation(std::size_t n);
Permutation inverse_permutation(std::span<const std::size_t> order);
bool is_permutation_of_range(std::span<const std::size_t> order, std::size_t n);

/// Throws InvariantViolation unless `order` is a bijection on [0, n).
void require_permutation(std::span<const std::size_t> order, std::size_t n,
                         std::string_view what);

/// Output-channel order plus one surviving-column-vector order per tile.
struct GyroPermutation {
    Permutation sigma_o;
    std::vector<std::vector<std::size_t>> sigma_i;

    friend bool operator==(const GyroPermutation&, const GyroPermutation&) = default;
};

}  // namespace hinm
