#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "iclust/data.hpp"
#include "iclust/neighbors.hpp"
#include "iclust/partition.hpp"

namespace iclust {

enum class Linkage { ward, complete, single };

std::string_view to_string(Linkage l);
std::optional<Linkage> parse_linkage(std::string_view s);

/// One agglomeration step. Leaves are observations 0..n-1; the cluster
/// created by step s has node id n + s.
struct DendrogramMerge {
    std::size_t left;   // smaller node id
    std::size_t right;  // larger node id
    double height;
    std::size_t size;   // observations in the new cluster
};

struct Dendrogram {
    std::size_t n = 0;
    std::vector<DendrogramMerge> merges;  // n - 1 entries
};

/// Agglomerative clustering by Lance-Williams updates.
///
/// Ward works on squared Euclidean distances and reports
/// height = sqrt(2 |A||B| / (|A| + |B|)) * ||mean(A) - mean(B)||, the scale
/// used by R's hclust(method = "ward.D2"). Complete and single linkage
/// report plain distances.
///
/// Every step merges the closest pair of clusters. Equal distances are
/// resolved by the smallest (a, b), where a < b and each cluster is
/// identified by its smallest observation index.
Dendrogram hierarchical(const DistanceMatrix& dm, Linkage linkage);

/// Undoes the last k - 1 merges. Cluster ids are 0..k-1 in order of each
/// cluster's smallest observation index.
Partition cut(const Dendrogram& d, std::size_t k);

struct KMeansResult {
    Partition partition;
    std::vector<double> centroids;  // k x p, row-major
    /// Total within-cluster sum of squares after every assignment step.
    std::vector<double> sse_trace;
    std::size_t iterations = 0;
};

/// k-means++ seeding followed by Lloyd iterations until the assignment stops
/// changing or `max_iter` iterations ran. An empty cluster is reseeded with
/// the point farthest from its own centroid.
KMeansResult kmeans(const DataMatrix& m, std::size_t k, std::uint64_t seed, std::size_t max_iter = 100);

/// ceil(factor * ln n) clamped to [1, n]; factor 10 is the default rule.
std::size_t default_k_init(std::size_t n, double factor = 10.0);

}  // namespace iclust
