#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "iclust/data.hpp"
#include "iclust/initcluster.hpp"
#include "iclust/merge.hpp"
#include "iclust/partition.hpp"

namespace iclust {

enum class InitMethod { ward, complete, single, kmeans, external };

std::string_view to_string(InitMethod m);
std::optional<InitMethod> parse_init_method(std::string_view s);

/// Number of initial clusters: ceil(factor * ln n), n / 4, or a fixed count.
struct KInitRule {
    enum class Kind { log_factor, quarter, fixed } kind = Kind::log_factor;
    double factor = 10.0;
    std::size_t fixed = 0;

    std::size_t resolve(std::size_t n) const;
    std::string describe() const;

    /// Accepts "auto", "<f>log" (e.g. "5log"), "n/4" or a positive integer.
    static KInitRule parse(std::string_view s);
};

struct PipelineConfig {
    bool standardize = true;
    InitMethod init = InitMethod::ward;
    KInitRule k_init;
    MergeConfig merge;
    std::uint64_t seed = 0;
    std::size_t kmeans_max_iter = 100;
    /// Required when init == external.
    std::optional<Partition> external_partition;
};

struct PipelineResult {
    std::size_t k_init = 0;
    Partition initial;
    MergeTrace trace;
    std::vector<Warning> warnings;
    double seconds_distances = 0.0;
    double seconds_init = 0.0;
    double seconds_merge = 0.0;

    const Partition& final_partition() const { return trace.final_partition; }
};

/// Standardize (optionally), compute distances, over-cluster, merge.
PipelineResult run_pipeline(const DataMatrix& data, const PipelineConfig& config);

/// Initial partition only, for a precomputed distance matrix.
Partition initial_partition(const DataMatrix& data, const DistanceMatrix& dm, std::size_t k, const PipelineConfig& config);

}  // namespace iclust
