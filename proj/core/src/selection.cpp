#include "hinm/selection.hpp"

#include <algorithm>
#include <numeric>

#include "hinm/errors.hpp"

namespace hinm {

std::vector<std::size_t> top_k_positions(std::span<const double> scores, std::size_t k) {
    if (k > scores.size()) throw CountError("cannot keep more entries than exist");
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
                      });
    idx.resize(k);
    std::ranges::sort(idx);
    return idx;
}

double top_k_sum(std::span<const double> scores, std::size_t k) {
    double sum = 0.0;
    for (std::size_t p : top_k_positions(scores, k)) sum += scores[p];
    return sum;
}

}  // namespace hinm
