#include "iclust/lof.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "iclust/error.hpp"

namespace iclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> densities(const ScopedNeighbors& nbrs, std::size_t q) {
    std::vector<double> out(nbrs.size());
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
        double sum = 0.0;
        const auto members = nbrs.members(a, q);
        for (const auto& b : members) {
            sum += std::max(nbrs.q_distance(b.index, q), b.distance);
        }
        out[a] = sum > 0.0 ? static_cast<double>(members.size()) / sum : kInf;
    }
    return out;
}

double density_ratio(double neighbor, double self) {
    if (self == kInf) {
        return neighbor == kInf ? 1.0 : 0.0;
    }
    return neighbor / self;  // +inf when only the neighbor is a clump
}

std::vector<double> scores_from(const ScopedNeighbors& nbrs, std::size_t q) {
    const auto dens = densities(nbrs, q);
    std::vector<double> out(nbrs.size());
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
        const auto members = nbrs.members(a, q);
        double sum = 0.0;
        for (const auto& b : members) {
            sum += density_ratio(dens[b.index], dens[a]);
        }
        out[a] = sum / static_cast<double>(members.size());
    }
    return out;
}

void check_scope(std::span<const std::size_t> scope, std::size_t q) {
    if (q < 1) {
        throw Error("q must be at least 1");
    }
    if (scope.size() < q + 1) {
        throw Error("scope of " + std::to_string(scope.size()) + " points is too small for q = " + std::to_string(q));
    }
}

}  // namespace

double lrd(const DistanceMatrix& dm, std::size_t i, std::size_t q, std::span<const std::size_t> scope) {
    auto it = std::find(scope.begin(), scope.end(), i);
    if (it == scope.end()) {
        throw Error("center " + std::to_string(i) + " is not in scope");
    }
    check_scope(scope, q);
    const ScopedNeighbors nbrs(dm, scope, q);
    const auto pos = static_cast<std::size_t>(it - scope.begin());
    double sum = 0.0;
    const auto members = nbrs.members(pos, q);
    for (const auto& b : members) {
        sum += std::max(nbrs.q_distance(b.index, q), b.distance);
    }
    return sum > 0.0 ? static_cast<double>(members.size()) / sum : kInf;
}

std::vector<double> lof_scores(const DistanceMatrix& dm, std::span<const std::size_t> scope, std::size_t q) {
    check_scope(scope, q);
    return scores_from(ScopedNeighbors(dm, scope, q), q);
}

LofProfile lof_profile(const ScopedNeighbors& nbrs, std::span<const std::size_t> scope, std::size_t q_max) {
    check_scope(scope, q_max);
    if (nbrs.size() != scope.size() || nbrs.q_max() < q_max) {
        throw Error("neighbor lists do not cover the requested profile");
    }
    LofProfile prof;
    prof.point_ids.assign(scope.begin(), scope.end());
    prof.q_max = q_max;
    prof.scores.assign(scope.size() * q_max, 0.0);
    for (std::size_t q = 1; q <= q_max; ++q) {
        const auto col = scores_from(nbrs, q);
        for (std::size_t i = 0; i < col.size(); ++i) {
            prof.scores[i * q_max + (q - 1)] = col[i];
        }
    }
    prof.representative.resize(scope.size());
    for (std::size_t i = 0; i < scope.size(); ++i) {
        double sum = 0.0;
        for (double s : prof.scores_of(i)) {
            sum += s;
        }
        prof.representative[i] = sum / static_cast<double>(q_max);
    }
    return prof;
}

LofProfile lof_profile(const DistanceMatrix& dm, std::span<const std::size_t> scope, std::size_t q_max) {
    check_scope(scope, q_max);
    return lof_profile(ScopedNeighbors(dm, scope, q_max), scope, q_max);
}

}  // namespace iclust
