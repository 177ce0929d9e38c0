#include "iclust/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "iclust/error.hpp"

namespace iclust {

ContingencyTable::ContingencyTable(std::size_t groups, std::size_t clusters, std::vector<std::size_t> counts)
    : groups_(groups), clusters_(clusters), counts_(std::move(counts)), group_sizes_(groups, 0),
      cluster_sizes_(clusters, 0) {
    if (counts_.size() != groups_ * clusters_) {
        throw Error("contingency table has the wrong number of cells");
    }
    for (std::size_t g = 0; g < groups_; ++g) {
        for (std::size_t c = 0; c < clusters_; ++c) {
            const std::size_t v = counts_[g * clusters_ + c];
            group_sizes_[g] += v;
            cluster_sizes_[c] += v;
            n_ += v;
        }
    }
    if (n_ == 0) {
        throw Error("contingency table is empty");
    }
}

ContingencyTable ContingencyTable::from_labels(std::span<const std::string> truth,
                                               std::span<const std::string> predicted) {
    if (truth.size() != predicted.size()) {
        throw Error("truth has " + std::to_string(truth.size()) + " labels, prediction has " +
                    std::to_string(predicted.size()));
    }
    std::map<std::string, std::size_t> rows;
    std::map<std::string, std::size_t> cols;
    for (const auto& s : truth) {
        rows.emplace(s, 0);
    }
    for (const auto& s : predicted) {
        cols.emplace(s, 0);
    }
    std::size_t k = 0;
    for (auto& [s, idx] : rows) {
        idx = k++;
    }
    k = 0;
    for (auto& [s, idx] : cols) {
        idx = k++;
    }
    std::vector<std::size_t> counts(rows.size() * cols.size(), 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++counts[rows[truth[i]] * cols.size() + cols[predicted[i]]];
    }
    return {rows.size(), cols.size(), std::move(counts)};
}

ContingencyTable ContingencyTable::from_partition(std::span<const std::string> truth, const Partition& predicted) {
    if (truth.size() != predicted.size()) {
        throw Error("truth has " + std::to_string(truth.size()) + " labels, partition covers " +
                    std::to_string(predicted.size()));
    }
    std::map<std::string, std::size_t> rows;
    for (const auto& s : truth) {
        rows.emplace(s, 0);
    }
    std::size_t k = 0;
    for (auto& [s, idx] : rows) {
        idx = k++;
    }
    std::map<ClusterId, std::size_t> cols;
    k = 0;
    for (const auto& [id, members] : predicted.clusters()) {
        cols.emplace(id, k++);
    }
    std::vector<std::size_t> counts(rows.size() * cols.size(), 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++counts[rows[truth[i]] * cols.size() + cols[predicted[i]]];
    }
    return {rows.size(), cols.size(), std::move(counts)};
}

std::size_t ContingencyTable::nonempty_clusters() const {
    return static_cast<std::size_t>(
        std::count_if(cluster_sizes_.begin(), cluster_sizes_.end(), [](std::size_t s) { return s > 0; }));
}

double purity(const ContingencyTable& t) {
    std::size_t hits = 0;
    for (std::size_t c = 0; c < t.clusters(); ++c) {
        std::size_t best = 0;
        for (std::size_t g = 0; g < t.groups(); ++g) {
            best = std::max(best, t(g, c));
        }
        hits += best;
    }
    return static_cast<double>(hits) / static_cast<double>(t.n());
}

namespace {

// -sum (x/n) log(x/n) over nonzero x.
double entropy_of(const std::vector<std::size_t>& sizes, double n) {
    double h = 0.0;
    for (std::size_t s : sizes) {
        if (s > 0) {
            const double p = static_cast<double>(s) / n;
            h -= p * std::log(p);
        }
    }
    return h;
}

}  // namespace

VMeasure v_measure(const ContingencyTable& t) {
    const double n = static_cast<double>(t.n());
    std::vector<std::size_t> gs(t.groups());
    std::vector<std::size_t> cs(t.clusters());
    for (std::size_t g = 0; g < t.groups(); ++g) {
        gs[g] = t.group_size(g);
    }
    for (std::size_t c = 0; c < t.clusters(); ++c) {
        cs[c] = t.cluster_size(c);
    }
    const double h_g = entropy_of(gs, n);
    const double h_k = entropy_of(cs, n);
    double h_g_given_k = 0.0;
    double h_k_given_g = 0.0;
    for (std::size_t g = 0; g < t.groups(); ++g) {
        for (std::size_t c = 0; c < t.clusters(); ++c) {
            const double x = static_cast<double>(t(g, c));
            if (x == 0.0) {
                continue;
            }
            h_g_given_k -= x / n * std::log(x / static_cast<double>(t.cluster_size(c)));
            h_k_given_g -= x / n * std::log(x / static_cast<double>(t.group_size(g)));
        }
    }
    VMeasure out{};
    out.homogeneity = h_g > 0.0 ? std::clamp(1.0 - h_g_given_k / h_g, 0.0, 1.0) : 1.0;
    out.completeness = h_k > 0.0 ? std::clamp(1.0 - h_k_given_g / h_k, 0.0, 1.0) : 1.0;
    const double sum = out.homogeneity + out.completeness;
    out.v = sum > 0.0 ? 2.0 * out.homogeneity * out.completeness / sum : 0.0;
    return out;
}

namespace {

struct Match {
    double f = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

Match best_match(const ContingencyTable& t, std::size_t g) {
    Match best;
    for (std::size_t c = 0; c < t.clusters(); ++c) {
        const std::size_t x = t(g, c);
        if (x == 0) {
            continue;
        }
        const double pr = static_cast<double>(x) / static_cast<double>(t.cluster_size(c));
        const double re = static_cast<double>(x) / static_cast<double>(t.group_size(g));
        const double f = 2.0 * pr * re / (pr + re);
        if (f > best.f || (f == best.f && pr > best.precision)) {
            best = {f, pr, re};
        }
    }
    return best;
}

}  // namespace

double f_measure(const ContingencyTable& t) {
    double total = 0.0;
    for (std::size_t g = 0; g < t.groups(); ++g) {
        if (t.group_size(g) == 0) {
            continue;
        }
        total += static_cast<double>(t.group_size(g)) / static_cast<double>(t.n()) * best_match(t, g).f;
    }
    return total;
}

WeightedGroupMeasures weighted_group_measures(const ContingencyTable& t, std::size_t small_threshold) {
    struct Acc {
        double weight = 0.0, f = 0.0, pr = 0.0, re = 0.0;
    };
    Acc big;
    Acc small;
    for (std::size_t g = 0; g < t.groups(); ++g) {
        const std::size_t size = t.group_size(g);
        if (size == 0) {
            continue;
        }
        const Match m = best_match(t, g);
        Acc& acc = size <= small_threshold ? small : big;
        const double w = static_cast<double>(size);
        acc.weight += w;
        acc.f += w * m.f;
        acc.pr += w * m.precision;
        acc.re += w * m.recall;
    }
    WeightedGroupMeasures out;
    if (big.weight > 0.0) {
        out.f_big = big.f / big.weight;
        out.precision_big = big.pr / big.weight;
        out.recall_big = big.re / big.weight;
    }
    if (small.weight > 0.0) {
        out.f_small = small.f / small.weight;
        out.precision_small = small.pr / small.weight;
        out.recall_small = small.re / small.weight;
    }
    return out;
}

EvaluationReport evaluate(const ContingencyTable& t, std::size_t small_threshold) {
    EvaluationReport r;
    r.purity = purity(t);
    r.f = f_measure(t);
    const VMeasure vm = v_measure(t);
    r.v = vm.v;
    r.homogeneity = vm.homogeneity;
    r.completeness = vm.completeness;
    r.weighted = weighted_group_measures(t, small_threshold);
    r.k_detected = t.nonempty_clusters();
    r.n = t.n();
    return r;
}

EvaluationReport evaluate(std::span<const std::string> truth, const Partition& predicted,
                          std::size_t small_threshold) {
    return evaluate(ContingencyTable::from_partition(truth, predicted), small_threshold);
}

ExtremeBaselines extreme_baselines(std::span<const std::string> truth, std::size_t small_threshold) {
    if (truth.empty()) {
        throw Error("baselines need at least one label");
    }
    std::vector<ClusterId> singletons(truth.size());
    std::iota(singletons.begin(), singletons.end(), 0);
    return {evaluate(truth, Partition(std::move(singletons)), small_threshold),
            evaluate(truth, Partition(std::vector<ClusterId>(truth.size(), 0)), small_threshold)};
}

std::vector<std::pair<std::string, std::optional<double>>> metric_values(const EvaluationReport& r) {
    return {{"P", r.purity},
            {"F", r.f},
            {"V", r.v},
            {"H", r.homogeneity},
            {"C", r.completeness},
            {"wF_b", r.weighted.f_big},
            {"wPr_b", r.weighted.precision_big},
            {"wRe_b", r.weighted.recall_big},
            {"wF_s", r.weighted.f_small},
            {"wPr_s", r.weighted.precision_small},
            {"wRe_s", r.weighted.recall_small},
            {"k", static_cast<double>(r.k_detected)}};
}

nlohmann::ordered_json to_json(const EvaluationReport& r) {
    nlohmann::ordered_json j;
    for (const auto& [name, value] : metric_values(r)) {
        if (name == "k") {
            j[name] = r.k_detected;
        } else if (value) {
            j[name] = *value;
        } else {
            j[name] = nullptr;
        }
    }
    j["n"] = r.n;
    return j;
}

}  // namespace iclust
