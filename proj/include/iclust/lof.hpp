#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iclust/neighbors.hpp"

namespace iclust {

// Local Outlier Factor, evaluated inside an explicit scope (a subset of the
// observations). Neighborhoods are tie-inclusive, so |N_q| may exceed q.
//
//   reach-dist_q(a, b) = max(q-distance(b), d(a, b))
//   lrd_q(a)           = |N_q(a)| / sum_{b in N_q(a)} reach-dist_q(a, b)
//   LOF_q(a)           = mean_{b in N_q(a)} lrd_q(b) / lrd_q(a)
//
// Duplicate clumps: when every reachability distance of `a` is zero,
// lrd_q(a) = +inf. Ratios then follow inf/inf = 1 and finite/inf = 0, so a
// point inside a clump of at least q+1 duplicates scores exactly 1. A point
// with finite density whose neighborhood contains such a clump scores +inf
// (it is infinitely less dense than its neighbors); this is the only way a
// score can be non-finite.

/// Per-point LOF scores for q = 1..q_max on one scope.
struct LofProfile {
    std::vector<std::size_t> point_ids;
    std::size_t q_max = 0;
    /// scores[i * q_max + (q - 1)] = LOF_q of point_ids[i].
    std::vector<double> scores;
    /// Mean of each point's scores over q.
    std::vector<double> representative;

    double score(std::size_t i, std::size_t q) const { return scores[i * q_max + (q - 1)]; }
    std::span<const double> scores_of(std::size_t i) const { return {scores.data() + i * q_max, q_max}; }
    std::size_t size() const noexcept { return point_ids.size(); }
};

/// Local reachability density of observation `i` within `scope`.
double lrd(const DistanceMatrix& dm, std::size_t i, std::size_t q, std::span<const std::size_t> scope);

/// LOF_q for every member of `scope`, in scope order. Requires |scope| >= q + 1.
std::vector<double> lof_scores(const DistanceMatrix& dm, std::span<const std::size_t> scope, std::size_t q);

/// Scores for q = 1..q_max and their per-point means. Requires |scope| >= q_max + 1.
LofProfile lof_profile(const DistanceMatrix& dm, std::span<const std::size_t> scope, std::size_t q_max);

/// Same, reusing precomputed neighbor lists (their q_max must cover `q_max`).
LofProfile lof_profile(const ScopedNeighbors& nbrs, std::span<const std::size_t> scope, std::size_t q_max);

}  // namespace iclust
