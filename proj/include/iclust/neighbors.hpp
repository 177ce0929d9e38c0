#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "iclust/data.hpp"

namespace iclust {

/// Symmetric pairwise distances with zero diagonal, stored as the strict
/// upper triangle (n(n-1)/2 entries).
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    /// `condensed` lists d(0,1), d(0,2), ..., d(0,n-1), d(1,2), ...
    /// Throws if the length is not n(n-1)/2 or any entry is negative or non-finite.
    DistanceMatrix(std::size_t n, std::vector<double> condensed);

    /// Builds from a full square matrix (row-major); checks symmetry and the zero diagonal.
    static DistanceMatrix from_square(std::size_t n, std::span<const double> square);

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const {
        if (i == j) {
            return 0.0;
        }
        if (i > j) {
            std::swap(i, j);
        }
        return d_[offset(i) + (j - i - 1)];
    }

    const std::vector<double>& condensed() const noexcept { return d_; }

private:
    std::size_t offset(std::size_t i) const noexcept { return i * (2 * n_ - i - 1) / 2; }

    std::size_t n_ = 0;
    std::vector<double> d_;
};

/// Euclidean distances between all rows of `m`.
DistanceMatrix pairwise_distances(const DataMatrix& m);

struct Neighbor {
    double distance;
    std::size_t index;

    friend bool operator<(const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    }
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Tie-inclusive q-neighborhood of one observation.
struct Neighborhood {
    std::size_t center = 0;
    std::size_t q = 0;
    /// Distance to the q-th nearest other observation.
    double q_distance = 0.0;
    /// Every j != center in scope with d(center, j) <= q_distance, ordered by (distance, index).
    std::vector<Neighbor> members;
};

/// q-neighborhood of observation `i` among `scope` (all observations when absent).
/// Requires 1 <= q <= |scope| - 1 and i in scope.
Neighborhood neighborhood(const DistanceMatrix& dm, std::size_t i, std::size_t q,
                          std::optional<std::span<const std::size_t>> scope = std::nullopt);

/// Nearest-neighbor lists for every member of a scope, deep enough to answer
/// neighborhood queries for every q <= q_max. Indices in the lists are
/// positions within the scope, not observation ids.
class ScopedNeighbors {
public:
    ScopedNeighbors(const DistanceMatrix& dm, std::span<const std::size_t> scope, std::size_t q_max);

    std::size_t size() const noexcept { return lists_.size(); }
    std::size_t q_max() const noexcept { return q_max_; }

    double q_distance(std::size_t pos, std::size_t q) const { return lists_[pos][q - 1].distance; }

    /// Members of the q-neighborhood of scope position `pos` (a prefix of its list).
    std::span<const Neighbor> members(std::size_t pos, std::size_t q) const;

private:
    std::size_t q_max_;
    std::vector<std::vector<Neighbor>> lists_;
};

}  // namespace iclust
