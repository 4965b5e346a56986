#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hinm/matrix.hpp"
#include "hinm/permutation.hpp"
#include "hinm/pruner.hpp"

namespace hinm {

struct OcpLogEntry {
    std::size_t iteration = 0;
    std::size_t samples_per_partition = 0;
    bool accepted = false;
    double retained = 0.0;  ///< saliency kept by vector pruning after this iteration
};

struct PruneReport {
    std::string variant = "none";
    double total_saliency = 0.0;
    double retained_saliency = 0.0;
    double baseline_retained_saliency = 0.0;  ///< identity permutations
    std::size_t elements = 0;
    std::size_t vector_pruned_zeros = 0;  ///< elements removed with their column vector
    std::size_t nm_pruned_zeros = 0;      ///< elements removed by N:M selection
    std::size_t total_zeros = 0;
    std::vector<std::vector<std::size_t>> tile_survivors;
    double initial_vector_retained = 0.0;
    std::vector<OcpLogEntry> ocp_log;
    std::vector<std::vector<double>> icp_logs;  ///< per tile; entry 0 is the starting order
    std::string output_order = "identity";      ///< "ocp" or "identity"
};

/// Fills the saliency totals, zero counts and survivor lists from final masks.
PruneReport summarize(const SaliencyMatrix& s, const MaskPair& masks);

}  // namespace hinm
