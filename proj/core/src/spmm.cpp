#include "hinm/spmm.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace hinm {

DenseMatrix dense_matmul(const DenseMatrix& w, const DenseMatrix& x) {
    if (w.cols() != x.rows()) {
        throw ShapeMismatch("cannot multiply " + to_string(w.shape()) + " by " + to_string(x.shape()));
    }
    DenseMatrix out(w.rows(), x.cols());
    for (std::size_t i = 0; i < w.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < w.cols(); ++k) acc += static_cast<double>(w(i, k)) * x(k, j);
            out(i, j) = static_cast<float>(acc);
        }
    }
    return out;
}

DenseMatrix gather_tile_buffer(const TileEncoding& tile, const DenseMatrix& x) {
    DenseMatrix buffer(tile.vector_index.size(), x.cols());
    for (std::size_t q = 0; q < tile.vector_index.size(); ++q) {
        const std::size_t src = tile.vector_index[q];
        if (src >= x.rows()) {
            throw IndexError("vector index " + std::to_string(src) + " exceeds input rows " +
                             std::to_string(x.rows()));
        }
        std::ranges::copy(x.row(src), buffer.row(q).begin());
    }
    return buffer;
}

DenseMatrix hinm_spmm(const HiNMEncoding& enc, const DenseMatrix& x) {
    if (x.rows() != enc.cols) {
        throw ShapeMismatch("input has " + std::to_string(x.rows()) + " rows, encoding expects " +
                            std::to_string(enc.cols));
    }
    check_encoding(enc);
    const std::size_t N = enc.nm_keep;
    const std::size_t M = enc.nm_group;
    DenseMatrix out(enc.rows, x.cols(), 0.0f);
    std::vector<double> acc(x.cols());
    for (std::size_t t = 0; t < enc.tiles.size(); ++t) {
        const TileEncoding& tile = enc.tiles[t];
        const DenseMatrix buffer = gather_tile_buffer(tile, x);
        for (std::size_t r = 0; r < enc.vector_size; ++r) {
            std::ranges::fill(acc, 0.0);
            const auto& idx = tile.nm_index[r];
            const auto& val = tile.kept_values[r];
            for (std::size_t i = 0; i < idx.size(); ++i) {
                const auto src = buffer.row((i / N) * M + idx[i]);
                const double w = val[i];
                for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += w * src[j];
            }
            auto dst = out.row(t * enc.vector_size + r);
            for (std::size_t j = 0; j < acc.size(); ++j) dst[j] = static_cast<float>(acc[j]);
        }
    }
    return out;
}

TileEncoding reorder_tile(const TileEncoding& tile, const std::vector<std::size_t>& order,
                          std::size_t keep, std::size_t group) {
    const std::size_t n = tile.vector_index.size();
    require_permutation(order, n, "tile order");
    for (std::size_t g = 0; g < n; g += group) {
        const std::size_t src_group = order[g] / group;
        for (std::size_t p = 1; p < group; ++p) {
            if (order[g + p] / group != src_group) {
                throw InvariantViolation("tile order splits an N:M group");
            }
        }
    }
    const Permutation where = inverse_permutation(order);  // old position -> new position
    TileEncoding out;
    out.vector_index.resize(n);
    for (std::size_t q = 0; q < n; ++q) out.vector_index[q] = tile.vector_index[order[q]];
    for (std::size_t r = 0; r < tile.nm_index.size(); ++r) {
        // (new position, value) of every kept element, then regroup ascending
        std::vector<std::pair<std::size_t, float>> moved;
        for (std::size_t i = 0; i < tile.nm_index[r].size(); ++i) {
            const std::size_t old_pos = (i / keep) * group + tile.nm_index[r][i];
            moved.emplace_back(where[old_pos], tile.kept_values[r][i]);
        }
        std::ranges::sort(moved, {}, &std::pair<std::size_t, float>::first);
        std::vector<std::uint32_t> idx;
        std::vector<float> val;
        for (const auto& [pos, v] : moved) {
            idx.push_back(static_cast<std::uint32_t>(pos % group));
            val.push_back(v);
        }
        out.nm_index.push_back(std::move(idx));
        out.kept_values.push_back(std::move(val));
    }
    return out;
}

std::vector<std::size_t> random_group_preserving_order(std::size_t survivors, std::size_t group,
                                                       Rng& rng) {
    const std::size_t groups = survivors / group;
    std::vector<std::size_t> group_order(groups);
    std::iota(group_order.begin(), group_order.end(), std::size_t{0});
    rng.shuffle(std::span(group_order));
    std::vector<std::size_t> order;
    order.reserve(survivors);
    std::vector<std::size_t> within(group);
    for (std::size_t g : group_order) {
        std::iota(within.begin(), within.end(), std::size_t{0});
        rng.shuffle(std::span(within));
        for (std::size_t p : within) order.push_back(g * group + p);
    }
    return order;
}

std::vector<KeptElement> kept_elements(const HiNMEncoding& enc) {
    std::vector<KeptElement> out;
    for (std::size_t t = 0; t < enc.tiles.size(); ++t) {
        const TileEncoding& tile = enc.tiles[t];
        for (std::size_t r = 0; r < tile.nm_index.size(); ++r) {
            for (std::size_t i = 0; i < tile.nm_index[r].size(); ++i) {
                const std::size_t pos = (i / enc.nm_keep) * enc.nm_group + tile.nm_index[r][i];
                out.push_back({t * enc.vector_size + r, tile.vector_index[pos], tile.kept_values[r][i]});
            }
        }
    }
    std::ranges::sort(out);
    return out;
}

ShuffleReport tile_shuffle_check(const HiNMEncoding& enc, const DenseMatrix& x, Rng& rng,
                                 std::size_t trials, double tolerance) {
    ShuffleReport report;
    report.tolerance = tolerance;
    const DenseMatrix reference = hinm_spmm(enc, x);
    const auto reference_set = kept_elements(enc);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        HiNMEncoding shuffled = enc;
        for (auto& tile : shuffled.tiles) {
            const auto order = random_group_preserving_order(tile.vector_index.size(), enc.nm_group, rng);
            tile = reorder_tile(tile, order, enc.nm_keep, enc.nm_group);
        }
        if (kept_elements(shuffled) != reference_set) report.kept_sets_identical = false;
        report.max_relative_error =
            std::max(report.max_relative_error, max_relative_error(hinm_spmm(shuffled, x), reference));
        ++report.trials;
    }
    report.within_tolerance = report.max_relative_error <= tolerance;
    return report;
}

DenseMatrix compose_layers(const LayerChain& chain, const DenseMatrix& x, bool restore_order) {
    if (chain.layers.empty()) throw ShapeMismatch("layer chain is empty");
    DenseMatrix h = x;
    for (std::size_t l = 0; l < chain.layers.size(); ++l) {
        const HiNMEncoding& enc = chain.layers[l];
        if (l > 0 && enc.cols != chain.layers[l - 1].rows) {
            throw ShapeMismatch("layer " + std::to_string(l) + " expects " + std::to_string(enc.cols) +
                                " inputs, previous layer produces " +
                                std::to_string(chain.layers[l - 1].rows));
        }
        h = hinm_spmm(enc, h);
        if (chain.relu && l + 1 < chain.layers.size()) {
            for (float& v : h.values()) v = std::max(v, 0.0f);
        }
    }
    if (!restore_order) return h;
    return permute_rows(h, inverse_permutation(chain.layers.back().sigma_o));
}

std::vector<ChainLayer> build_chain(const std::vector<DenseMatrix>& weights, const HiNMConfig& cfg,
                                    bool use_permutation) {
    std::vector<ChainLayer> chain;
    Permutation previous;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const DenseMatrix& w = weights[l];
        if (l > 0 && w.cols() != weights[l - 1].rows()) {
            throw ShapeMismatch("layer " + std::to_string(l) + " input width does not match the previous layer");
        }
        ChainLayer layer;
        layer.prepermuted = l == 0 ? w : permute_columns(w, previous);
        HiNMConfig layer_cfg = cfg;
        layer_cfg.seed = cfg.seed + l;
        const ValidatedConfig v = validate_config(layer_cfg, w.shape());
        const SaliencyMatrix s = magnitude_saliency(layer.prepermuted);
        GyroResult r = use_permutation ? gyro_permute(s, v) : prune_identity(s, v);
        layer.encoding = encode(layer.prepermuted, r.masks, r.sigma);
        layer.masks = std::move(r.masks);
        previous = r.sigma.sigma_o;
        chain.push_back(std::move(layer));
    }
    return chain;
}

}  // namespace hinm
