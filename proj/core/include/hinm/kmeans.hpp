#pragma once

#include <cstddef>
#include <vector>

#include "hinm/matrix.hpp"
#include "hinm/rng.hpp"

namespace hinm {

/// Each cluster lists row indices into the feature matrix, ascending; clusters
/// are ordered by their smallest member.
using Clusters = std::vector<std::vector<std::size_t>>;

struct KMeansOptions {
    std::size_t restarts = 4;
    std::size_t max_rounds = 50;     ///< assign/update rounds per restart
    std::size_t max_swap_passes = 20;
};

/// Equal-size clustering of feature rows. Per restart: k-means++ seeding,
/// then rounds of capacity-limited assignment (points with the largest
/// nearest-vs-second-nearest margin choose first), then pairwise swaps between
/// clusters while they lower the within-cluster sum of squares. The best
/// restart wins. Throws CountError unless rows == num_clusters * cluster_size.
Clusters balanced_kmeans(const Matrix<double>& features, std::size_t num_clusters,
                         std::size_t cluster_size, Rng& rng, const KMeansOptions& options = {});

/// Sum over clusters of squared Euclidean distance to the cluster mean.
double within_cluster_sse(const Matrix<double>& features, const Clusters& clusters);

}  // namespace hinm
