#include "hinm/pruner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hinm/hnmw.hpp"
#include "hinm/selection.hpp"

namespace hinm {
namespace {

void require_shape(Shape got, Shape want, const char* what) {
    if (got != want) {
        throw ShapeMismatch(std::string(what) + ": expected " + to_string(want) + ", got " +
                            to_string(got));
    }
}

}  // namespace

SaliencyMatrix magnitude_saliency(const DenseMatrix& w) {
    Matrix<double> scores(w.rows(), w.cols());
    for (std::size_t r = 0; r < w.rows(); ++r) {
        for (std::size_t c = 0; c < w.cols(); ++c) scores(r, c) = std::abs(static_cast<double>(w(r, c)));
    }
    return SaliencyMatrix(std::move(scores));
}

SaliencyMatrix load_saliency(const std::filesystem::path& path, Shape expected) {
    const DenseMatrix raw = read_hnmw(path);
    require_shape(raw.shape(), expected, "saliency shape");
    Matrix<double> scores(raw.rows(), raw.cols());
    for (std::size_t r = 0; r < raw.rows(); ++r) {
        for (std::size_t c = 0; c < raw.cols(); ++c) scores(r, c) = raw(r, c);
    }
    return SaliencyMatrix(std::move(scores));
}

std::span<const std::size_t> tile_rows(std::span<const std::size_t> sigma_o,
                                       std::size_t vector_size, std::size_t tile) {
    return sigma_o.subspan(tile * vector_size, vector_size);
}

std::vector<double> column_vector_scores(const SaliencyMatrix& s,
                                         std::span<const std::size_t> rows) {
    std::vector<std::size_t> sorted(rows.begin(), rows.end());
    std::ranges::sort(sorted);
    std::vector<double> scores(s.cols(), 0.0);
    for (std::size_t r : sorted) {
        for (std::size_t c = 0; c < s.cols(); ++c) scores[c] += s(r, c);
    }
    return scores;
}

BoolMatrix vector_prune(const SaliencyMatrix& s, const ValidatedConfig& cfg,
                        std::span<const std::size_t> sigma_o) {
    require_shape(s.shape(), cfg.shape, "saliency shape");
    require_permutation(sigma_o, s.rows(), "sigma_o");
    if (cfg.vectors_kept % cfg.M() != 0) {
        throw BudgetError("per-tile vector budget is not a multiple of M");
    }
    BoolMatrix mask(cfg.tiles, s.cols(), 0);
    for (std::size_t t = 0; t < cfg.tiles; ++t) {
        const auto scores = column_vector_scores(s, tile_rows(sigma_o, cfg.V(), t));
        for (std::size_t c : top_k_positions(scores, cfg.vectors_kept)) mask(t, c) = 1;
    }
    return mask;
}

std::vector<std::size_t> tile_survivors(const BoolMatrix& vector_mask, std::size_t tile) {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < vector_mask.cols(); ++c) {
        if (vector_mask(tile, c)) out.push_back(c);
    }
    return out;
}

BoolMatrix nm_prune(const SaliencyMatrix& s, const BoolMatrix& vector_mask,
                    const ValidatedConfig& cfg, const GyroPermutation& sigma) {
    require_shape(s.shape(), cfg.shape, "saliency shape");
    require_shape(vector_mask.shape(), Shape{cfg.tiles, s.cols()}, "vector mask shape");
    require_permutation(sigma.sigma_o, s.rows(), "sigma_o");
    if (sigma.sigma_i.size() != cfg.tiles) {
        throw InvariantViolation("sigma_i must have one order per tile");
    }
    const std::size_t M = cfg.M();
    const std::size_t N = cfg.N();
    BoolMatrix mask(s.rows(), s.cols(), 0);
    std::vector<double> group_scores(M);
    for (std::size_t t = 0; t < cfg.tiles; ++t) {
        const auto& order = sigma.sigma_i[t];
        std::vector<std::size_t> sorted = order;
        std::ranges::sort(sorted);
        if (sorted != tile_survivors(vector_mask, t)) {
            throw InvariantViolation("sigma_i of tile " + std::to_string(t) +
                                     " is not an ordering of its surviving vectors");
        }
        if (order.size() % M != 0) {
            throw GroupingError("tile " + std::to_string(t) + " has " +
                                std::to_string(order.size()) +
                                " survivors, not a multiple of M=" + std::to_string(M));
        }
        for (std::size_t r : tile_rows(sigma.sigma_o, cfg.V(), t)) {
            for (std::size_t g = 0; g < order.size(); g += M) {
                for (std::size_t p = 0; p < M; ++p) group_scores[p] = s(r, order[g + p]);
                for (std::size_t p : top_k_positions(group_scores, N)) mask(r, order[g + p]) = 1;
            }
        }
    }
    return mask;
}

GyroPermutation natural_input_order(const BoolMatrix& vector_mask, Permutation sigma_o) {
    GyroPermutation sigma{std::move(sigma_o), {}};
    sigma.sigma_i.reserve(vector_mask.rows());
    for (std::size_t t = 0; t < vector_mask.rows(); ++t) {
        sigma.sigma_i.push_back(tile_survivors(vector_mask, t));
    }
    return sigma;
}

MaskPair prune(const SaliencyMatrix& s, const ValidatedConfig& cfg, const GyroPermutation& sigma) {
    MaskPair masks{cfg.V(), cfg.N(), cfg.M(), vector_prune(s, cfg, sigma.sigma_o), {}};
    masks.element_mask = nm_prune(s, masks.vector_mask, cfg, sigma);
    return masks;
}

PrunedLayer prune_without_permutation(const SaliencyMatrix& s, const ValidatedConfig& cfg) {
    Permutation identity = identity_permutation(s.rows());
    const BoolMatrix vmask = vector_prune(s, cfg, identity);
    PrunedLayer out{natural_input_order(vmask, std::move(identity)), {}};
    out.masks = prune(s, cfg, out.sigma);
    return out;
}

DenseMatrix apply_masks(const DenseMatrix& w, const MaskPair& masks) {
    require_shape(masks.element_mask.shape(), w.shape(), "element mask shape");
    DenseMatrix out(w.rows(), w.cols(), 0.0f);
    for (std::size_t r = 0; r < w.rows(); ++r) {
        for (std::size_t c = 0; c < w.cols(); ++c) {
            if (masks.element_mask(r, c)) out(r, c) = w(r, c);
        }
    }
    return out;
}

double retained_saliency(const SaliencyMatrix& s, const MaskPair& masks) {
    require_shape(masks.element_mask.shape(), s.shape(), "element mask shape");
    double sum = 0.0;
    for (std::size_t r = 0; r < s.rows(); ++r) {
        for (std::size_t c = 0; c < s.cols(); ++c) {
            if (masks.element_mask(r, c)) sum += s(r, c);
        }
    }
    return sum;
}

void check_masks(const MaskPair& masks, const GyroPermutation& sigma,
                 std::size_t vectors_kept_per_tile) {
    const std::size_t V = masks.vector_size;
    const std::size_t M = masks.nm_group;
    const std::size_t N = masks.nm_keep;
    const BoolMatrix& vm = masks.vector_mask;
    const BoolMatrix& em = masks.element_mask;
    const auto fail = [](const std::string& msg) { throw InvariantViolation(msg); };

    if (V == 0 || M == 0 || N == 0 || N > M) fail("mask pattern parameters are invalid");
    if (em.rows() % V != 0 || vm.rows() != em.rows() / V || vm.cols() != em.cols()) {
        fail("vector mask shape does not match element mask");
    }
    if (!is_permutation_of_range(sigma.sigma_o, em.rows())) fail("sigma_o is not a permutation");
    if (sigma.sigma_i.size() != vm.rows()) fail("sigma_i must have one order per tile");

    for (std::size_t t = 0; t < vm.rows(); ++t) {
        const auto survivors = tile_survivors(vm, t);
        if (survivors.size() != vectors_kept_per_tile) {
            fail("tile " + std::to_string(t) + " keeps " + std::to_string(survivors.size()) +
                 " vectors, budget is " + std::to_string(vectors_kept_per_tile));
        }
        std::vector<std::size_t> sorted = sigma.sigma_i[t];
        std::ranges::sort(sorted);
        if (sorted != survivors) fail("sigma_i of tile " + std::to_string(t) + " is inconsistent");
        if (survivors.size() % M != 0) fail("survivor count is not a multiple of M");

        const auto& order = sigma.sigma_i[t];
        for (std::size_t r : tile_rows(sigma.sigma_o, V, t)) {
            for (std::size_t c = 0; c < em.cols(); ++c) {
                if (em(r, c) && !vm(t, c)) fail("element kept inside a pruned vector");
            }
            for (std::size_t g = 0; g < order.size(); g += M) {
                std::size_t kept = 0;
                for (std::size_t p = 0; p < M; ++p) kept += em(r, order[g + p]) ? 1 : 0;
                if (kept != N) {
                    fail("row " + std::to_string(r) + " group " + std::to_string(g / M) +
                         " keeps " + std::to_string(kept) + " elements, expected " +
                         std::to_string(N));
                }
            }
        }
    }
}

}  // namespace hinm
