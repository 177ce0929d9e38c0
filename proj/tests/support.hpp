#pragma once

// Generators and brute-force oracles shared by the unit and acceptance tests.
// The oracles are straight transcriptions of the textbook definitions and do
// not call into the library beyond plain data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "iclust/data.hpp"
#include "iclust/neighbors.hpp"

namespace iclust::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal(double mu = 0.0, double sd = 1.0) { return std::normal_distribution<double>(mu, sd)(engine_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
    }
    bool coin(double p = 0.5) { return uniform() < p; }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

inline DataMatrix random_matrix(Gen& g, std::size_t n, std::size_t p, double lo = -5.0, double hi = 5.0) {
    std::vector<double> v(n * p);
    for (auto& x : v) {
        x = g.uniform(lo, hi);
    }
    return {n, p, std::move(v)};
}

// Random points with some rows copied over others.
inline DataMatrix random_with_duplicates(Gen& g, std::size_t n, std::size_t p) {
    std::vector<double> v(n * p);
    for (auto& x : v) {
        x = std::round(g.uniform(-4.0, 4.0) * 4.0) / 4.0;
    }
    const std::size_t dups = g.index(0, n / 3);
    for (std::size_t k = 0; k < dups; ++k) {
        const std::size_t from = g.index(0, n - 1);
        const std::size_t to = g.index(0, n - 1);
        std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(from * p), p, v.begin() + static_cast<std::ptrdiff_t>(to * p));
    }
    return {n, p, std::move(v)};
}

// Isotropic Gaussian blobs. Returns the data and the blob index of each row.
struct Blobs {
    DataMatrix data;
    std::vector<std::string> labels;
};

inline Blobs gaussian_blobs(Gen& g, const std::vector<std::size_t>& sizes, const std::vector<std::vector<double>>& centers,
                            double sd) {
    const std::size_t p = centers.front().size();
    std::vector<double> v;
    std::vector<std::string> labels;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
        for (std::size_t i = 0; i < sizes[b]; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                v.push_back(centers[b][j] + g.normal(0.0, sd));
            }
            labels.push_back("g" + std::to_string(b));
        }
    }
    return {DataMatrix(labels.size(), p, std::move(v)), std::move(labels)};
}

inline double euclid(const DataMatrix& m, std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const double d = m(a, j) - m(b, j);
        s += d * d;
    }
    return std::sqrt(s);
}

// Square distance table, d[a][b].
using Square = std::vector<std::vector<double>>;

inline Square square_distances(const DataMatrix& m) {
    Square d(m.rows(), std::vector<double>(m.rows(), 0.0));
    for (std::size_t a = 0; a < m.rows(); ++a) {
        for (std::size_t b = 0; b < m.rows(); ++b) {
            d[a][b] = euclid(m, a, b);
        }
    }
    return d;
}

inline Square square_from(const DistanceMatrix& dm) {
    Square d(dm.size(), std::vector<double>(dm.size(), 0.0));
    for (std::size_t a = 0; a < dm.size(); ++a) {
        for (std::size_t b = 0; b < dm.size(); ++b) {
            d[a][b] = dm(a, b);
        }
    }
    return d;
}

// Regular simplex: n unit vectors e_i scaled, all pairwise distances sqrt(2)*s.
inline DataMatrix simplex(std::size_t n, double scale = 1.0) {
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        v[i * n + i] = scale;
    }
    return {n, n, std::move(v)};
}

// Breunig et al. LOF over the points listed in `scope` (indices into d).
// Returned vector is ordered like `scope`.
struct BreunigOracle {
    const Square& d;
    std::vector<std::size_t> scope;
    std::size_t q;

    double kdist(std::size_t a) const {
        std::vector<double> others;
        for (std::size_t b : scope) {
            if (b != a) {
                others.push_back(d[a][b]);
            }
        }
        std::sort(others.begin(), others.end());
        return others[q - 1];
    }
    std::vector<std::size_t> nbhd(std::size_t a) const {
        const double k = kdist(a);
        std::vector<std::size_t> out;
        for (std::size_t b : scope) {
            if (b != a && d[a][b] <= k) {
                out.push_back(b);
            }
        }
        return out;
    }
    double lrd(std::size_t a) const {
        double sum = 0.0;
        const auto n = nbhd(a);
        for (std::size_t b : n) {
            sum += std::max(kdist(b), d[a][b]);
        }
        if (sum == 0.0) {
            return kInf;
        }
        return 1.0 / (sum / static_cast<double>(n.size()));
    }
    double lof(std::size_t a) const {
        const double own = lrd(a);
        const auto n = nbhd(a);
        double total = 0.0;
        for (std::size_t b : n) {
            const double other = lrd(b);
            double ratio;
            if (std::isinf(own) && std::isinf(other)) {
                ratio = 1.0;
            } else if (std::isinf(own)) {
                ratio = 0.0;
            } else {
                ratio = other / own;
            }
            total += ratio;
        }
        return total / static_cast<double>(n.size());
    }
    std::vector<double> all() const {
        std::vector<double> out;
        for (std::size_t a : scope) {
            out.push_back(lof(a));
        }
        return out;
    }
};

inline bool same_score(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) {
        return a == b;
    }
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

inline std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = i;
    }
    return v;
}

// Canonical form of a grouping: each point mapped to the smallest index in its group.
template <typename Assignment>
std::vector<std::size_t> canonical(const Assignment& a) {
    std::map<typename Assignment::value_type, std::size_t> first;
    std::vector<std::size_t> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = first.emplace(a[i], i).first->second;
    }
    return out;
}

}  // namespace iclust::testing
