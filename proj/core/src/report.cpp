#include "hinm/report.hpp"

namespace hinm {

PruneReport summarize(const SaliencyMatrix& s, const MaskPair& masks) {
    PruneReport report;
    report.total_saliency = s.total();
    report.retained_saliency = retained_saliency(s, masks);
    report.elements = s.rows() * s.cols();
    const std::size_t vector_kept_elements = [&] {
        std::size_t n = 0;
        for (std::uint8_t v : masks.vector_mask.values()) n += v ? masks.vector_size : 0;
        return n;
    }();
    std::size_t kept = 0;
    for (std::uint8_t v : masks.element_mask.values()) kept += v ? 1 : 0;
    report.vector_pruned_zeros = report.elements - vector_kept_elements;
    report.nm_pruned_zeros = vector_kept_elements - kept;
    report.total_zeros = report.elements - kept;
    for (std::size_t t = 0; t < masks.vector_mask.rows(); ++t) {
        report.tile_survivors.push_back(tile_survivors(masks.vector_mask, t));
    }
    return report;
}

}  // namespace hinm
