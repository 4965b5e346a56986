#include "hinm/permutation.hpp"

#include <numeric>
#include <string>

#include "hinm/errors.hpp"

namespace hinm {

Permutation identity_permutation(std::size_t n) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return p;
}

Permutation inverse_permutation(std::span<const std::size_t> order) {
    require_permutation(order, order.size(), "permutation");
    Permutation inv(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) inv[order[p]] = p;
    return inv;
}

bool is_permutation_of_range(std::span<const std::size_t> order, std::size_t n) {
    if (order.size() != n) return false;
    std::vector<bool> seen(n, false);
    for (std::size_t v : order) {
        if (v >= n || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

void require_permutation(std::span<const std::size_t> order, std::size_t n,
                         std::string_view what) {
    if (!is_permutation_of_range(order, n)) {
        throw InvariantViolation(std::string(what) + " is not a permutation of [0, " +
                                 std::to_string(n) + ")");
    }
}

}  // namespace hinm
