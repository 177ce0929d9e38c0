#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "iclust/pipeline.hpp"

namespace iclust::cli {

// Every command returns a process exit status. Errors and warnings go to
// `diag` as one JSON object per line; `out` receives short human-readable
// progress output.

struct ClusterOptions {
    std::filesystem::path input;
    std::optional<std::string> label_column;
    PipelineConfig pipeline;
    std::optional<std::filesystem::path> external_partition;
    std::string output_prefix = "iclust";
};

int cmd_cluster(const ClusterOptions& opt, std::ostream& out, std::ostream& diag);

struct LofOptions {
    std::filesystem::path input;
    std::optional<std::string> label_column;
    bool standardize = true;
    std::optional<std::size_t> q;
    std::size_t q_max = 5;
    std::filesystem::path output = "lof.csv";
};

int cmd_lof(const LofOptions& opt, std::ostream& out, std::ostream& diag);

struct EvalOptions {
    std::filesystem::path predicted;
    std::filesystem::path truth;
    std::size_t small_threshold = 10;
    std::optional<std::filesystem::path> output;
};

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& diag);

struct SampleOptions {
    std::filesystem::path input;
    std::string label_column;
    std::vector<std::size_t> sizes;
    std::vector<std::string> pinned_labels;
    std::size_t replications = 1;
    std::uint64_t seed = 0;
    std::string output_prefix = "sample";
};

int cmd_sample(const SampleOptions& opt, std::ostream& out, std::ostream& diag);

struct BenchOptions {
    std::string preset;
    std::vector<std::size_t> sizes;  // overrides the preset design when set
    std::filesystem::path source;
    std::string label_column;
    std::size_t replications = 10;
    std::uint64_t seed = 0;
    std::optional<std::size_t> small_threshold;
    bool standardize_before_sampling = false;
    PipelineConfig pipeline;
    std::size_t threads = 1;
    std::string output_prefix = "bench";
};

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& diag);

/// Text printed by --version.
std::string version_text();

/// Reads a two-column "row_index,label" CSV into labels ordered by row index.
std::vector<std::string> read_label_csv(const std::filesystem::path& path);

}  // namespace iclust::cli
