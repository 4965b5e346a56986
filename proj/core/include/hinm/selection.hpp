#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hinm {

/// Positions of the k largest scores, ordered by descending score with ties
/// resolved toward the lower position. Returned positions are sorted ascending.
std::vector<std::size_t> top_k_positions(std::span<const double> scores, std::size_t k);

/// Sum of the k largest scores (same selection rule as top_k_positions).
double top_k_sum(std::span<const double> scores, std::size_t k);

}  // namespace hinm
