#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "iclust/lof.hpp"
#include "iclust/neighbors.hpp"
#include "iclust/partition.hpp"

namespace iclust {

/// How the critical value is estimated from a LOF profile.
///   cv1: median + m * mad over all LOF_q values
///   cv2: mean + m * sd over all LOF_q values
///   cv3: median + m * mad over the representative values
///   cv4: mean + m * sd over the representative values
/// where m is `MergeConfig::multiplier`, mad is scaled by `mad_scale` and sd
/// uses the n-1 denominator.
enum class CvStrategy { cv1, cv2, cv3, cv4 };

std::string_view to_string(CvStrategy s);
std::optional<CvStrategy> parse_cv_strategy(std::string_view s);

struct MergeConfig {
    std::size_t q_max_cap = 5;
    CvStrategy cv_strategy = CvStrategy::cv1;
    double mad_scale = 1.4826;
    double multiplier = 2.0;
};

/// Outcome of testing whether `candidate` fits into `host_cluster`.
struct MergeTest {
    std::size_t candidate = 0;
    ClusterId host_cluster = 0;
    std::size_t q_max = 0;
    double lof_value = 0.0;
    double cv = 0.0;
    bool passed = false;  // lof_value < cv
};

/// Closest pair of clusters under single linkage. l < m, o is in cluster l
/// and p in cluster m.
struct ClusterPair {
    ClusterId l = 0;
    ClusterId m = 0;
    std::size_t o = 0;
    std::size_t p = 0;
    double distance = 0.0;

    friend bool operator==(const ClusterPair&, const ClusterPair&) = default;
};

using PairSet = std::set<std::pair<ClusterId, ClusterId>>;

/// Single-linkage closest pair among cluster pairs not in `excluded`
/// (pairs stored as (smaller id, larger id)). Ties go to the smallest
/// (l, m, o, p). Empty when every pair is excluded. Needs >= 2 clusters.
std::optional<ClusterPair> closest_pair(const Partition& part, const DistanceMatrix& dm, const PairSet& excluded = {});

double median(std::vector<double> values);
/// Scaled median absolute deviation.
double mad(const std::vector<double>& values, double scale);
double mean(std::span<const double> values);
/// Sample standard deviation (n-1); 0 for a single value.
double sample_sd(std::span<const double> values);

/// Critical value of a profile. Non-finite scores propagate: the result is
/// +inf when the location or dispersion estimate is infinite.
double critical_value(const LofProfile& profile, CvStrategy strategy, double mad_scale, double multiplier = 2.0);

/// Tests `candidate` against the cluster formed by `host_members`: builds the
/// LOF profile on host + candidate with q_max = min(|scope| - 1, q_max_cap).
MergeTest merge_test(const DistanceMatrix& dm, std::span<const std::size_t> host_members, std::size_t candidate,
                     const MergeConfig& config, ClusterId host_id = 0);

struct MergeEvent {
    ClusterPair pair;
    /// Candidate p tested against cluster l.
    MergeTest first;
    /// Candidate o tested against cluster m; absent when `first` failed.
    std::optional<MergeTest> second;
    bool merged = false;
};

struct MergeTrace {
    std::vector<MergeEvent> events;
    Partition final_partition;
    std::size_t merges = 0;
    std::size_t rejections = 0;
};

/// Repeatedly takes the closest non-excluded pair; merges cluster m into l
/// when p passes against l and o passes against m, otherwise excludes the
/// pair. A merge makes every pair involving the merged cluster eligible
/// again. Stops when no eligible pair is left.
MergeTrace run(const DistanceMatrix& dm, const Partition& initial, const MergeConfig& config = {});

/// Applies the accepted merges of a trace to `initial`.
Partition replay(const Partition& initial, const MergeTrace& trace);

/// One JSON object per event and line.
void write_trace_jsonl(std::ostream& out, const MergeTrace& trace);

}  // namespace iclust
