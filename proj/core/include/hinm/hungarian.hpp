#pragma once

#include <cstddef>
#include <vector>

#include "hinm/matrix.hpp"

namespace hinm {

/// costs(i, j): cost of giving candidate j to partition i.
using CostMatrix = Matrix<double>;

struct Assignment {
    std::vector<std::size_t> column_for_row;
    double total_cost = 0.0;
};

/// Minimum-cost perfect matching on a square matrix (shortest augmenting
/// paths with dual potentials, O(n^3)). Among optimal matchings the
/// lexicographically smallest column_for_row is returned.
/// Throws ShapeMismatch for non-square input and ValueError for non-finite costs.
Assignment hungarian(const CostMatrix& costs);

/// Sum of costs(i, column_for_row[i]).
double assignment_total(const CostMatrix& costs, const std::vector<std::size_t>& column_for_row);

}  // namespace hinm
