#include "iclust/merge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <tuple>

#include <json.hpp>

#include "iclust/error.hpp"

namespace iclust {

std::string_view to_string(CvStrategy s) {
    switch (s) {
        case CvStrategy::cv1:
            return "cv1";
        case CvStrategy::cv2:
            return "cv2";
        case CvStrategy::cv3:
            return "cv3";
        case CvStrategy::cv4:
            return "cv4";
    }
    return "?";
}

std::optional<CvStrategy> parse_cv_strategy(std::string_view s) {
    if (s == "cv1") {
        return CvStrategy::cv1;
    }
    if (s == "cv2") {
        return CvStrategy::cv2;
    }
    if (s == "cv3") {
        return CvStrategy::cv3;
    }
    if (s == "cv4") {
        return CvStrategy::cv4;
    }
    return std::nullopt;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Orders candidate pairs: distance first, then ids.
auto pair_key(const ClusterPair& c) { return std::tie(c.distance, c.l, c.m, c.o, c.p); }

bool better(const ClusterPair& a, const ClusterPair& b) { return pair_key(a) < pair_key(b); }

}  // namespace

std::optional<ClusterPair> closest_pair(const Partition& part, const DistanceMatrix& dm, const PairSet& excluded) {
    if (part.k() < 2) {
        throw Error("closest_pair needs at least two clusters");
    }
    if (part.size() != dm.size()) {
        throw Error("partition and distance matrix sizes differ");
    }
    std::optional<ClusterPair> best;
    const std::size_t n = part.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const ClusterId a = part[i];
            const ClusterId b = part[j];
            if (a == b) {
                continue;
            }
            ClusterPair c = a < b ? ClusterPair{a, b, i, j, dm(i, j)} : ClusterPair{b, a, j, i, dm(i, j)};
            if (excluded.count({c.l, c.m}) != 0) {
                continue;
            }
            if (!best || better(c, *best)) {
                best = c;
            }
        }
    }
    return best;
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw Error("median of an empty sample");
    }
    const std::size_t n = values.size();
    auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    const double upper = *mid;
    if (n % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), mid);
    if (lower == upper) {
        return upper;
    }
    return lower + (upper - lower) / 2.0;
}

double mad(const std::vector<double>& values, double scale) {
    const double center = median(values);
    if (!std::isfinite(center)) {
        return kInf;
    }
    std::vector<double> dev;
    dev.reserve(values.size());
    for (double v : values) {
        dev.push_back(std::fabs(v - center));
    }
    return scale * median(std::move(dev));
}

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw Error("mean of an empty sample");
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
    if (values.size() < 2) {
        return 0.0;
    }
    const double mu = mean(values);
    if (!std::isfinite(mu)) {
        return kInf;
    }
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mu) * (v - mu);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double critical_value(const LofProfile& profile, CvStrategy strategy, double mad_scale, double multiplier) {
    if (profile.size() == 0) {
        throw Error("critical value of an empty profile");
    }
    const bool over_all = strategy == CvStrategy::cv1 || strategy == CvStrategy::cv2;
    const std::vector<double>& sample = over_all ? profile.scores : profile.representative;
    double location = 0.0;
    double spread = 0.0;
    if (strategy == CvStrategy::cv1 || strategy == CvStrategy::cv3) {
        location = median(sample);
        spread = mad(sample, mad_scale);
    } else {
        location = mean(sample);
        spread = sample_sd(sample);
    }
    if (!std::isfinite(location) || !std::isfinite(spread)) {
        return kInf;
    }
    return location + multiplier * spread;
}

MergeTest merge_test(const DistanceMatrix& dm, std::span<const std::size_t> host_members, std::size_t candidate,
                     const MergeConfig& config, ClusterId host_id) {
    if (host_members.empty()) {
        throw Error("merge test needs a nonempty host cluster");
    }
    if (std::find(host_members.begin(), host_members.end(), candidate) != host_members.end()) {
        throw Error("candidate " + std::to_string(candidate) + " already belongs to the host cluster");
    }
    if (config.q_max_cap < 1) {
        throw Error("q_max cap must be at least 1");
    }
    std::vector<std::size_t> scope(host_members.begin(), host_members.end());
    scope.push_back(candidate);
    const std::size_t q_max = std::min(scope.size() - 1, config.q_max_cap);
    const LofProfile prof = lof_profile(dm, scope, q_max);

    MergeTest t;
    t.candidate = candidate;
    t.host_cluster = host_id;
    t.q_max = q_max;
    t.lof_value = prof.representative.back();
    t.cv = critical_value(prof, config.cv_strategy, config.mad_scale, config.multiplier);
    t.passed = t.lof_value < t.cv;
    return t;
}

namespace {

// Single-linkage table over the clusters of a partition, kept current as
// clusters merge. Slots are the clusters in ascending id order.
class LinkageTable {
public:
    LinkageTable(const Partition& part, const DistanceMatrix& dm) {
        for (const auto& [id, members] : part.clusters()) {
            slot_of_.emplace(id, ids_.size());
            ids_.push_back(id);
        }
        const std::size_t k = ids_.size();
        alive_.assign(k, true);
        excluded_.assign(k * k, false);
        table_.assign(k * k, std::nullopt);
        const std::size_t n = part.size();
        std::vector<std::size_t> slot(n);
        for (std::size_t i = 0; i < n; ++i) {
            slot[i] = slot_of_.at(part[i]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const std::size_t a = slot[i];
                const std::size_t b = slot[j];
                if (a == b) {
                    continue;
                }
                const ClusterPair c = a < b ? ClusterPair{ids_[a], ids_[b], i, j, dm(i, j)}
                                            : ClusterPair{ids_[b], ids_[a], j, i, dm(i, j)};
                offer(std::min(a, b), std::max(a, b), c);
            }
        }
    }

    std::optional<ClusterPair> closest() const {
        std::optional<ClusterPair> best;
        const std::size_t k = ids_.size();
        for (std::size_t a = 0; a < k; ++a) {
            if (!alive_[a]) {
                continue;
            }
            for (std::size_t b = a + 1; b < k; ++b) {
                if (!alive_[b]) {
                    continue;
                }
                const auto& c = table_[a * k + b];
                if (!c || excluded_[a * k + b] || (best && !better(*c, *best))) {
                    continue;
                }
                best = c;
            }
        }
        return best;
    }

    void exclude(ClusterId l, ClusterId m) {
        const std::size_t a = slot_of_.at(l);
        const std::size_t b = slot_of_.at(m);
        excluded_[std::min(a, b) * ids_.size() + std::max(a, b)] = true;
    }

    // Cluster `from` is absorbed by `into`; exclusions involving either are dropped.
    void merge(ClusterId into, ClusterId from) {
        const std::size_t k = ids_.size();
        const std::size_t si = slot_of_.at(into);
        const std::size_t sf = slot_of_.at(from);
        alive_[sf] = false;
        for (std::size_t c = 0; c < k; ++c) {
            excluded_[std::min(si, c) * k + std::max(si, c)] = false;
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (!alive_[c] || c == si) {
                continue;
            }
            const auto& via = table_[std::min(sf, c) * k + std::max(sf, c)];
            if (!via) {
                continue;
            }
            // Re-orient the absorbed cluster's pair so its point now sits in `into`.
            const std::size_t inner = sf < c ? via->o : via->p;
            const std::size_t outer = sf < c ? via->p : via->o;
            const ClusterPair cand = si < c ? ClusterPair{into, ids_[c], inner, outer, via->distance}
                                            : ClusterPair{ids_[c], into, outer, inner, via->distance};
            offer(std::min(si, c), std::max(si, c), cand);
        }
    }

private:
    void offer(std::size_t a, std::size_t b, const ClusterPair& c) {
        auto& cell = table_[a * ids_.size() + b];
        if (!cell || better(c, *cell)) {
            cell = c;
        }
    }

    std::vector<ClusterId> ids_;
    std::map<ClusterId, std::size_t> slot_of_;
    std::vector<bool> alive_;
    std::vector<bool> excluded_;
    std::vector<std::optional<ClusterPair>> table_;
};

}  // namespace

MergeTrace run(const DistanceMatrix& dm, const Partition& initial, const MergeConfig& config) {
    if (initial.size() != dm.size()) {
        throw Error("partition covers " + std::to_string(initial.size()) + " observations, distance matrix has " +
                    std::to_string(dm.size()));
    }
    MergeTrace trace;
    Partition part = initial;
    if (part.k() < 2) {
        trace.final_partition = std::move(part);
        return trace;
    }
    LinkageTable table(part, dm);
    while (part.k() >= 2) {
        const auto pair = table.closest();
        if (!pair) {
            break;
        }
        MergeEvent ev;
        ev.pair = *pair;
        ev.first = merge_test(dm, part.members(pair->l), pair->p, config, pair->l);
        if (ev.first.passed) {
            ev.second = merge_test(dm, part.members(pair->m), pair->o, config, pair->m);
        }
        ev.merged = ev.first.passed && ev.second && ev.second->passed;
        if (ev.merged) {
            part.merge(pair->l, pair->m);
            table.merge(pair->l, pair->m);
            ++trace.merges;
        } else {
            table.exclude(pair->l, pair->m);
            ++trace.rejections;
        }
        trace.events.push_back(std::move(ev));
    }
    trace.final_partition = std::move(part);
    return trace;
}

Partition replay(const Partition& initial, const MergeTrace& trace) {
    Partition part = initial;
    for (const auto& ev : trace.events) {
        if (ev.merged) {
            part.merge(ev.pair.l, ev.pair.m);
        }
    }
    return part;
}

namespace {

nlohmann::json number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

}  // namespace

void write_trace_jsonl(std::ostream& out, const MergeTrace& trace) {
    std::size_t step = 0;
    for (const auto& ev : trace.events) {
        nlohmann::ordered_json j;
        j["step"] = step++;
        j["l"] = ev.pair.l;
        j["m"] = ev.pair.m;
        j["o"] = ev.pair.o;
        j["p"] = ev.pair.p;
        j["distance"] = number(ev.pair.distance);
        j["q_max_p"] = ev.first.q_max;
        j["lof_p"] = number(ev.first.lof_value);
        j["cv_p"] = number(ev.first.cv);
        j["passed_p"] = ev.first.passed;
        if (ev.second) {
            j["q_max_o"] = ev.second->q_max;
            j["lof_o"] = number(ev.second->lof_value);
            j["cv_o"] = number(ev.second->cv);
            j["passed_o"] = ev.second->passed;
        } else {
            j["q_max_o"] = nullptr;
            j["lof_o"] = nullptr;
            j["cv_o"] = nullptr;
            j["passed_o"] = nullptr;
        }
        j["decision"] = ev.merged ? "merge" : "reject";
        out << j.dump() << '\n';
    }
}

}  // namespace iclust
