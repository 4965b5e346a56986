#include "hinm/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace hinm {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

Matrix<double> seed_centroids(const Matrix<double>& x, std::size_t k, Rng& rng) {
    const std::size_t n = x.rows();
    Matrix<double> centroids(k, x.cols());
    std::vector<char> chosen(n, 0);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

    std::size_t pick = rng.index(n);
    for (std::size_t c = 0; c < k; ++c) {
        chosen[pick] = 1;
        std::ranges::copy(x.row(pick), centroids.row(c).begin());
        if (c + 1 == k) break;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], squared_distance(x.row(i), x.row(pick)));
            if (!chosen[i]) total += nearest[i];
        }
        const double draw = rng.unit();
        if (total > 0.0) {
            const double target = draw * total;
            double acc = 0.0;
            pick = n;
            std::size_t last = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i] || nearest[i] == 0.0) continue;
                last = i;
                acc += nearest[i];
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) pick = last;
        } else {
            // Remaining points coincide with centroids; take the next unchosen one.
            std::vector<std::size_t> free;
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) free.push_back(i);
            }
            pick = free[static_cast<std::size_t>(draw * static_cast<double>(free.size()))];
        }
    }
    return centroids;
}

std::vector<std::size_t> assign_balanced(const Matrix<double>& x, const Matrix<double>& centroids,
                                         std::size_t capacity) {
    const std::size_t n = x.rows();
    const std::size_t k = centroids.rows();
    Matrix<double> dist(n, k);
    std::vector<double> margin(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        double second = best;
        for (std::size_t c = 0; c < k; ++c) {
            const double d = squared_distance(x.row(i), centroids.row(c));
            dist(i, c) = d;
            if (d < best) {
                second = best;
                best = d;
            } else if (d < second) {
                second = d;
            }
        }
        margin[i] = k > 1 ? second - best : 0.0;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return margin[a] > margin[b]; });

    std::vector<std::size_t> label(n, 0);
    std::vector<std::size_t> load(k, 0);
    for (std::size_t i : order) {
        std::size_t best_c = k;
        for (std::size_t c = 0; c < k; ++c) {
            if (load[c] < capacity && (best_c == k || dist(i, c) < dist(i, best_c))) best_c = c;
        }
        label[i] = best_c;
        ++load[best_c];
    }
    return label;
}

Matrix<double> cluster_sums(const Matrix<double>& x, const std::vector<std::size_t>& label,
                            std::size_t k) {
    Matrix<double> sums(k, x.cols(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        auto s = sums.row(label[i]);
        const auto row = x.row(i);
        for (std::size_t d = 0; d < x.cols(); ++d) s[d] += row[d];
    }
    return sums;
}

// Swapping a (in P) with b (in Q) between equal-size clusters changes the
// total within-cluster SSE by -2((S_P - S_Q).(b - a) + |b - a|^2) / size.
void refine_by_swaps(const Matrix<double>& x, std::vector<std::size_t>& label, std::size_t k,
                     std::size_t passes) {
    const std::size_t n = x.rows();
    const std::size_t dims = x.cols();
    Matrix<double> sums = cluster_sums(x, label, k);
    std::vector<double> diff(dims);
    for (std::size_t pass = 0; pass < passes; ++pass) {
        bool changed = false;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const std::size_t p = label[a];
                const std::size_t q = label[b];
                if (p == q) continue;
                double gain = 0.0;
                const auto xa = x.row(a);
                const auto xb = x.row(b);
                const auto sp = sums.row(p);
                const auto sq = sums.row(q);
                for (std::size_t d = 0; d < dims; ++d) {
                    diff[d] = xb[d] - xa[d];
                    gain += (sp[d] - sq[d]) * diff[d] + diff[d] * diff[d];
                }
                if (gain > 0.0) {
                    // moving b into P and a into Q lowers the SSE
                    auto wp = sums.row(p);
                    auto wq = sums.row(q);
                    for (std::size_t d = 0; d < dims; ++d) {
                        wp[d] += diff[d];
                        wq[d] -= diff[d];
                    }
                    std::swap(label[a], label[b]);
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
}

Clusters to_clusters(const std::vector<std::size_t>& label, std::size_t k) {
    Clusters clusters(k);
    for (std::size_t i = 0; i < label.size(); ++i) clusters[label[i]].push_back(i);
    std::ranges::sort(clusters, [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return clusters;
}

}  // namespace

double within_cluster_sse(const Matrix<double>& features, const Clusters& clusters) {
    double total = 0.0;
    std::vector<double> mean(features.cols());
    for (const auto& cluster : clusters) {
        if (cluster.empty()) continue;
        std::ranges::fill(mean, 0.0);
        for (std::size_t i : cluster) {
            const auto row = features.row(i);
            for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += row[d];
        }
        for (double& m : mean) m /= static_cast<double>(cluster.size());
        for (std::size_t i : cluster) total += squared_distance(features.row(i), mean);
    }
    return total;
}

Clusters balanced_kmeans(const Matrix<double>& features, std::size_t num_clusters,
                         std::size_t cluster_size, Rng& rng, const KMeansOptions& options) {
    const std::size_t n = features.rows();
    if (num_clusters == 0 || cluster_size == 0 || n != num_clusters * cluster_size) {
        throw CountError("balanced k-means needs exactly " + std::to_string(num_clusters) +
                         " x " + std::to_string(cluster_size) + " samples, got " +
                         std::to_string(n));
    }
    if (num_clusters == 1) {
        Clusters single(1, std::vector<std::size_t>(n));
        std::iota(single[0].begin(), single[0].end(), std::size_t{0});
        return single;
    }

    Clusters best;
    double best_sse = std::numeric_limits<double>::infinity();
    for (std::size_t restart = 0; restart < std::max<std::size_t>(1, options.restarts); ++restart) {
        Matrix<double> centroids = seed_centroids(features, num_clusters, rng);
        std::vector<std::size_t> label;
        for (std::size_t round = 0; round < options.max_rounds; ++round) {
            auto next = assign_balanced(features, centroids, cluster_size);
            if (next == label) break;
            label = std::move(next);
            centroids = cluster_sums(features, label, num_clusters);
            for (double& v : centroids.values()) v /= static_cast<double>(cluster_size);
        }
        refine_by_swaps(features, label, num_clusters, options.max_swap_passes);
        Clusters clusters = to_clusters(label, num_clusters);
        const double sse = within_cluster_sse(features, clusters);
        if (sse < best_sse) {
            best_sse = sse;
            best = std::move(clusters);
        }
    }
    return best;
}

}  // namespace hinm
