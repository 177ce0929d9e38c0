#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "iclust/partition.hpp"

namespace iclust {

/// Ground-truth groups (rows) against detected clusters (columns).
class ContingencyTable {
public:
    /// counts is groups x clusters, row-major. Empty rows or columns are allowed.
    ContingencyTable(std::size_t groups, std::size_t clusters, std::vector<std::size_t> counts);

    /// Rows follow the sorted distinct truth labels, columns the sorted distinct predicted ids.
    static ContingencyTable from_labels(std::span<const std::string> truth, std::span<const std::string> predicted);
    static ContingencyTable from_partition(std::span<const std::string> truth, const Partition& predicted);

    std::size_t groups() const noexcept { return groups_; }
    std::size_t clusters() const noexcept { return clusters_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t operator()(std::size_t g, std::size_t c) const { return counts_[g * clusters_ + c]; }
    std::size_t group_size(std::size_t g) const { return group_sizes_[g]; }
    std::size_t cluster_size(std::size_t c) const { return cluster_sizes_[c]; }
    /// Columns with at least one member.
    std::size_t nonempty_clusters() const;

private:
    std::size_t groups_;
    std::size_t clusters_;
    std::vector<std::size_t> counts_;
    std::vector<std::size_t> group_sizes_;
    std::vector<std::size_t> cluster_sizes_;
    std::size_t n_ = 0;
};

double purity(const ContingencyTable& t);

struct VMeasure {
    double homogeneity;
    double completeness;
    double v;
};

/// Homogeneity, completeness and their harmonic mean (natural-log entropies;
/// H = 1 when there is a single group, C = 1 when there is a single cluster).
VMeasure v_measure(const ContingencyTable& t);

/// Size-weighted best-match F over groups.
double f_measure(const ContingencyTable& t);

/// Best-match precision / recall / F aggregated separately over big groups
/// (size > small_threshold) and small groups (size <= small_threshold).
/// Each group is matched to the cluster maximizing its F (ties: higher
/// precision, then lower column); each category reports the size-weighted
/// mean of its groups' scores. A category with no groups is undefined.
struct WeightedGroupMeasures {
    std::optional<double> f_big, precision_big, recall_big;
    std::optional<double> f_small, precision_small, recall_small;
};

WeightedGroupMeasures weighted_group_measures(const ContingencyTable& t, std::size_t small_threshold);

inline constexpr std::size_t kDefaultSmallThreshold = 10;

struct EvaluationReport {
    double purity = 0.0;
    double f = 0.0;
    double v = 0.0;
    double homogeneity = 0.0;
    double completeness = 0.0;
    WeightedGroupMeasures weighted;
    std::size_t k_detected = 0;
    std::size_t n = 0;
};

EvaluationReport evaluate(const ContingencyTable& t, std::size_t small_threshold = kDefaultSmallThreshold);
EvaluationReport evaluate(std::span<const std::string> truth, const Partition& predicted,
                          std::size_t small_threshold = kDefaultSmallThreshold);

struct ExtremeBaselines {
    EvaluationReport all_singletons;
    EvaluationReport one_cluster;
};

ExtremeBaselines extreme_baselines(std::span<const std::string> truth,
                                   std::size_t small_threshold = kDefaultSmallThreshold);

/// Metric name/value pairs in a fixed order; undefined weighted values are absent.
std::vector<std::pair<std::string, std::optional<double>>> metric_values(const EvaluationReport& r);

nlohmann::ordered_json to_json(const EvaluationReport& r);

}  // namespace iclust
