#ifndef CADCLUST_KMEANS_HPP
#define CADCLUST_KMEANS_HPP

#include "cadclust/clustering_result.hpp"
#include "cadclust/dataset.hpp"

namespace cadclust {

/// Sum of squared distances of each point to its cluster's coordinate mean.
double within_cluster_sse(const Dataset& data, const Partition& part);

/**
 * Lloyd's algorithm from k-means++ seeding, restarted `n_init` times; the
 * restart with the lowest SSE is kept. result.objective holds -SSE.
 */
ClusteringResult kmeans_fit(const Dataset& data, const KmeansParams& params);

}  // namespace cadclust

#endif  // CADCLUST_KMEANS_HPP
