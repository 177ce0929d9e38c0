#include "iclust/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iclust/error.hpp"

namespace iclust {

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> condensed) : n_(n), d_(std::move(condensed)) {
    const std::size_t expected = n_ < 2 ? 0 : n_ * (n_ - 1) / 2;
    if (d_.size() != expected) {
        throw Error("condensed distance vector has " + std::to_string(d_.size()) + " entries, expected " +
                    std::to_string(expected));
    }
    for (double v : d_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw Error("distances must be finite and nonnegative");
        }
    }
}

DistanceMatrix DistanceMatrix::from_square(std::size_t n, std::span<const double> square) {
    if (square.size() != n * n) {
        throw Error("square distance matrix has wrong size");
    }
    std::vector<double> c;
    c.reserve(n < 2 ? 0 : n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        if (square[i * n + i] != 0.0) {
            throw Error("distance matrix diagonal must be zero");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (square[i * n + j] != square[j * n + i]) {
                throw Error("distance matrix is not symmetric");
            }
            c.push_back(square[i * n + j]);
        }
    }
    return {n, std::move(c)};
}

DistanceMatrix pairwise_distances(const DataMatrix& m) {
    const std::size_t n = m.rows();
    const std::size_t p = m.cols();
    std::vector<double> c;
    c.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double* a = m.row(i).data();
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* b = m.row(j).data();
            double ss = 0.0;
            for (std::size_t k = 0; k < p; ++k) {
                const double diff = a[k] - b[k];
                ss += diff * diff;
            }
            c.push_back(std::sqrt(ss));
        }
    }
    return {n, std::move(c)};
}

namespace {

// Sorted (distance, index) list holding every candidate within the q-th
// smallest distance. `index_of(k)` maps candidate k to the index reported.
template <typename IndexOf>
std::vector<Neighbor> nearest_with_ties(const DistanceMatrix& dm, std::size_t center, std::size_t count,
                                        std::size_t skip, std::size_t q, IndexOf index_of,
                                        std::vector<Neighbor>& scratch) {
    scratch.clear();
    for (std::size_t k = 0; k < count; ++k) {
        if (k == skip) {
            continue;
        }
        const std::size_t obs = index_of(k);
        scratch.push_back({dm(center, obs), k});
    }
    auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(q - 1);
    std::nth_element(scratch.begin(), nth, scratch.end());
    const double cutoff = nth->distance;
    std::vector<Neighbor> out;
    for (const auto& nb : scratch) {
        if (nb.distance <= cutoff) {
            out.push_back(nb);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Neighborhood neighborhood(const DistanceMatrix& dm, std::size_t i, std::size_t q,
                          std::optional<std::span<const std::size_t>> scope) {
    const std::size_t n = dm.size();
    if (i >= n) {
        throw Error("center " + std::to_string(i) + " out of range");
    }
    std::vector<Neighbor> scratch;
    std::vector<Neighbor> list;
    if (scope) {
        auto it = std::find(scope->begin(), scope->end(), i);
        if (it == scope->end()) {
            throw Error("center " + std::to_string(i) + " is not in scope");
        }
        if (q < 1 || q + 1 > scope->size()) {
            throw Error("q = " + std::to_string(q) + " out of range for a scope of " + std::to_string(scope->size()));
        }
        const std::size_t skip = static_cast<std::size_t>(it - scope->begin());
        list = nearest_with_ties(dm, i, scope->size(), skip, q, [&](std::size_t k) { return (*scope)[k]; }, scratch);
        for (auto& nb : list) {
            nb.index = (*scope)[nb.index];
        }
        std::sort(list.begin(), list.end());
    } else {
        if (q < 1 || q + 1 > n) {
            throw Error("q = " + std::to_string(q) + " out of range for " + std::to_string(n) + " observations");
        }
        list = nearest_with_ties(dm, i, n, i, q, [](std::size_t k) { return k; }, scratch);
    }
    Neighborhood nb;
    nb.center = i;
    nb.q = q;
    nb.q_distance = list[q - 1].distance;
    nb.members = std::move(list);
    return nb;
}

ScopedNeighbors::ScopedNeighbors(const DistanceMatrix& dm, std::span<const std::size_t> scope, std::size_t q_max)
    : q_max_(q_max) {
    if (q_max < 1 || q_max + 1 > scope.size()) {
        throw Error("q_max = " + std::to_string(q_max) + " out of range for a scope of " + std::to_string(scope.size()));
    }
    std::vector<Neighbor> scratch;
    scratch.reserve(scope.size());
    lists_.reserve(scope.size());
    for (std::size_t pos = 0; pos < scope.size(); ++pos) {
        lists_.push_back(
            nearest_with_ties(dm, scope[pos], scope.size(), pos, q_max, [&](std::size_t k) { return scope[k]; }, scratch));
    }
}

std::span<const Neighbor> ScopedNeighbors::members(std::size_t pos, std::size_t q) const {
    const auto& list = lists_[pos];
    const double cutoff = list[q - 1].distance;
    std::size_t end = q;
    while (end < list.size() && list[end].distance <= cutoff) {
        ++end;
    }
    return {list.data(), end};
}

}  // namespace iclust
