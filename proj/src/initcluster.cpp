#include "iclust/initcluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "iclust/error.hpp"
#include "iclust/rng.hpp"

namespace iclust {

std::string_view to_string(Linkage l) {
    switch (l) {
        case Linkage::ward:
            return "ward";
        case Linkage::complete:
            return "complete";
        case Linkage::single:
            return "single";
    }
    return "?";
}

std::optional<Linkage> parse_linkage(std::string_view s) {
    if (s == "ward") {
        return Linkage::ward;
    }
    if (s == "complete") {
        return Linkage::complete;
    }
    if (s == "single") {
        return Linkage::single;
    }
    return std::nullopt;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Condensed working copy of the distance matrix indexed by slot. A cluster
// lives in the slot of its smallest observation index, so slot order equals
// the tie-break order.
class Workspace {
public:
    Workspace(const DistanceMatrix& dm, bool squared) : n_(dm.size()), d_(dm.condensed()) {
        if (squared) {
            for (double& v : d_) {
                v *= v;
            }
        }
    }

    double& at(std::size_t i, std::size_t j) {
        if (i > j) {
            std::swap(i, j);
        }
        return d_[i * (2 * n_ - i - 1) / 2 + (j - i - 1)];
    }

private:
    std::size_t n_;
    std::vector<double> d_;
};

}  // namespace

Dendrogram hierarchical(const DistanceMatrix& dm, Linkage linkage) {
    const std::size_t n = dm.size();
    if (n < 2) {
        throw Error("hierarchical clustering needs at least 2 observations");
    }
    Workspace w(dm, linkage == Linkage::ward);

    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), 0);
    std::vector<std::size_t> size(n, 1);
    std::vector<std::size_t> node(n);
    std::iota(node.begin(), node.end(), 0);
    std::vector<bool> alive(n, true);

    // nn[s]: smallest-distance active slot t > s (smallest t on ties).
    std::vector<std::size_t> nn(n, n);
    std::vector<double> nnd(n, kInf);
    auto recompute = [&](std::size_t s) {
        nn[s] = n;
        nnd[s] = kInf;
        for (std::size_t t = s + 1; t < n; ++t) {
            if (alive[t]) {
                const double v = w.at(s, t);
                if (v < nnd[s]) {
                    nnd[s] = v;
                    nn[s] = t;
                }
            }
        }
    };
    for (std::size_t s = 0; s + 1 < n; ++s) {
        recompute(s);
    }

    Dendrogram out;
    out.n = n;
    out.merges.reserve(n - 1);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t s = n;
        double best = kInf;
        for (std::size_t u : active) {
            if (nn[u] < n && (nnd[u] < best || s == n)) {
                best = nnd[u];
                s = u;
            }
        }
        const std::size_t t = nn[s];
        const double dst = w.at(s, t);

        for (std::size_t u : active) {
            if (u == s || u == t) {
                continue;
            }
            double& target = w.at(s, u);
            const double other = w.at(t, u);
            switch (linkage) {
                case Linkage::single:
                    target = std::min(target, other);
                    break;
                case Linkage::complete:
                    target = std::max(target, other);
                    break;
                case Linkage::ward: {
                    const double ns = static_cast<double>(size[s]);
                    const double nt = static_cast<double>(size[t]);
                    const double nu = static_cast<double>(size[u]);
                    target = ((ns + nu) * target + (nt + nu) * other - nu * dst) / (ns + nt + nu);
                    break;
                }
            }
        }

        const double height = linkage == Linkage::ward ? std::sqrt(std::max(dst, 0.0)) : dst;
        out.merges.push_back({std::min(node[s], node[t]), std::max(node[s], node[t]), height, size[s] + size[t]});
        size[s] += size[t];
        node[s] = n + step;
        alive[t] = false;
        active.erase(std::find(active.begin(), active.end(), t));

        for (std::size_t u : active) {
            if (u == s) {
                recompute(u);
            } else if (nn[u] == s || nn[u] == t) {
                recompute(u);
            } else if (u < s) {
                const double v = w.at(u, s);
                if (v < nnd[u] || (v == nnd[u] && s < nn[u])) {
                    nnd[u] = v;
                    nn[u] = s;
                }
            }
        }
    }
    return out;
}

Partition cut(const Dendrogram& d, std::size_t k) {
    const std::size_t n = d.n;
    if (k < 1 || k > n) {
        throw Error("cannot cut a dendrogram of " + std::to_string(n) + " leaves into " + std::to_string(k) +
                    " clusters");
    }
    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t s = 0; s < n - k; ++s) {
        const auto& m = d.merges[s];
        parent[find(m.left)] = n + s;
        parent[find(m.right)] = n + s;
    }
    std::vector<ClusterId> assignment(n);
    std::vector<std::size_t> label(2 * n - 1, n);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (label[root] == n) {
            label[root] = next++;
        }
        assignment[i] = label[root];
    }
    return Partition(std::move(assignment));
}

namespace {

double squared_distance(std::span<const double> a, const double* b) {
    double ss = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        ss += diff * diff;
    }
    return ss;
}

}  // namespace

KMeansResult kmeans(const DataMatrix& m, std::size_t k, std::uint64_t seed, std::size_t max_iter) {
    const std::size_t n = m.rows();
    const std::size_t p = m.cols();
    if (k < 1 || k > n) {
        throw Error("k = " + std::to_string(k) + " out of range for " + std::to_string(n) + " observations");
    }
    if (max_iter < 1) {
        throw Error("max_iter must be at least 1");
    }
    Rng rng(seed);

    // k-means++ seeding.
    std::vector<double> centroids;
    centroids.reserve(k * p);
    std::vector<bool> chosen(n, false);
    auto add_center = [&](std::size_t i) {
        chosen[i] = true;
        auto r = m.row(i);
        centroids.insert(centroids.end(), r.begin(), r.end());
    };
    add_center(rng.below(n));
    std::vector<double> closest(n);
    for (std::size_t i = 0; i < n; ++i) {
        closest[i] = squared_distance(m.row(i), centroids.data());
    }
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (double v : closest) {
            total += v;
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += closest[i];
                if (closest[i] > 0.0 && acc > target) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {
                for (std::size_t i = n; i-- > 0;) {
                    if (closest[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        } else {
            // Every point coincides with a center; take an unused index.
            std::vector<std::size_t> unused;
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) {
                    unused.push_back(i);
                }
            }
            pick = unused[rng.below(unused.size())];
        }
        add_center(pick);
        const double* ctr = centroids.data() + c * p;
        for (std::size_t i = 0; i < n; ++i) {
            closest[i] = std::min(closest[i], squared_distance(m.row(i), ctr));
        }
    }

    KMeansResult res;
    std::vector<std::size_t> assign(n, k);
    std::vector<double> dist(n, 0.0);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double bd = kInf;
            for (std::size_t c = 0; c < k; ++c) {
                const double v = squared_distance(m.row(i), centroids.data() + c * p);
                if (v < bd) {
                    bd = v;
                    best = c;
                }
            }
            if (assign[i] != best) {
                changed = true;
                assign[i] = best;
            }
            dist[i] = bd;
        }

        // Empty-cluster repair.
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t c : assign) {
            ++counts[c];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) {
                continue;
            }
            std::size_t far = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[assign[i]] > 1 && (far == n || dist[i] > dist[far])) {
                    far = i;
                }
            }
            if (far == n) {
                break;
            }
            --counts[assign[far]];
            assign[far] = c;
            counts[c] = 1;
            dist[far] = 0.0;
            std::copy_n(m.row(far).data(), p, centroids.begin() + static_cast<std::ptrdiff_t>(c * p));
            changed = true;
        }

        double sse = 0.0;
        for (double v : dist) {
            sse += v;
        }
        res.sse_trace.push_back(sse);
        res.iterations = iter + 1;
        if (!changed) {
            break;
        }

        std::fill(centroids.begin(), centroids.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto r = m.row(i);
            double* ctr = centroids.data() + assign[i] * p;
            for (std::size_t j = 0; j < p; ++j) {
                ctr[j] += r[j];
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t j = 0; j < p; ++j) {
                centroids[c * p + j] /= static_cast<double>(counts[c]);
            }
        }
    }
    res.partition = Partition(std::vector<ClusterId>(assign.begin(), assign.end()));
    res.centroids = std::move(centroids);
    return res;
}

std::size_t default_k_init(std::size_t n, double factor) {
    if (n < 1) {
        throw Error("k_init needs at least one observation");
    }
    const double raw = std::ceil(factor * std::log(static_cast<double>(n)));
    const std::size_t k = raw < 1.0 ? 1 : static_cast<std::size_t>(raw);
    return std::clamp<std::size_t>(k, 1, n);
}

}  // namespace iclust
