#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "iclust/data.hpp"
#include "iclust/eval.hpp"
#include "iclust/pipeline.hpp"

namespace iclust {

/// A named imbalanced sampling design.
struct BenchPreset {
    std::string name;
    std::string description;
    std::vector<std::size_t> group_sizes;
    /// Groups of at most this size count as small in the weighted measures.
    std::size_t small_threshold;
};

const std::vector<BenchPreset>& bench_presets();
const BenchPreset* find_preset(const std::string& name);

struct BenchSpec {
    std::string name;
    std::vector<std::size_t> group_sizes;
    std::size_t replications = 10;
    std::uint64_t seed = 0;
    std::size_t small_threshold = kDefaultSmallThreshold;
    /// Standardize the whole source once before sampling instead of each sample.
    bool standardize_before_sampling = false;
    PipelineConfig pipeline;
    std::size_t threads = 1;
};

BenchSpec spec_from_preset(const BenchPreset& preset);

struct ReplicationResult {
    std::size_t replication = 0;
    std::size_t n = 0;
    std::size_t k_init = 0;
    std::size_t merges = 0;
    EvaluationReport initial;
    EvaluationReport final;
    ExtremeBaselines baselines;
};

struct BenchResult {
    BenchSpec spec;
    std::vector<ReplicationResult> replications;
};

/// Runs every replication (in parallel when spec.threads > 1). Results are
/// independent of the thread count.
BenchResult run_bench(const LabeledDataset& source, const BenchSpec& spec);

/// Long format: replication,stage,metric,value (stages: initial, iclust,
/// all_singletons, one_cluster). Undefined values are written as NA.
void write_long_csv(std::ostream& out, const BenchResult& result);

struct Summary {
    std::size_t count = 0;
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

/// Order statistics with linear interpolation between closest ranks
/// (R's default quantile type 7).
Summary summarize(std::vector<double> values);

/// stage -> metric -> summary over replications.
nlohmann::ordered_json aggregate_json(const BenchResult& result);

/// Thread count from ICLUST_THREADS, or 1.
std::size_t default_thread_count();

}  // namespace iclust
