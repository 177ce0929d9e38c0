#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "iclust/bench.hpp"
#include "iclust/commands.hpp"

namespace {

using iclust::CvStrategy;
using iclust::InitMethod;
using iclust::PipelineConfig;

struct PipelineFlags {
    std::string init = "ward";
    std::string k_init = "auto";
    std::string cv = "cv1";
    bool no_standardize = false;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& flags, PipelineConfig& cfg) {
    cmd->add_option("--init", flags.init, "Initial clustering: ward, complete, single, kmeans or external")
        ->check(CLI::IsMember({"ward", "complete", "single", "kmeans", "external"}))
        ->capture_default_str();
    cmd->add_option("--k-init", flags.k_init, "Initial cluster count: auto (10log), <f>log, n/4 or an integer")
        ->capture_default_str();
    cmd->add_option("--q-max", cfg.merge.q_max_cap, "Largest neighborhood size for LOF")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--cv", flags.cv, "Critical value estimator")
        ->check(CLI::IsMember({"cv1", "cv2", "cv3", "cv4"}))
        ->capture_default_str();
    cmd->add_option("--mad-scale", cfg.merge.mad_scale, "MAD consistency constant")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--cv-multiplier", cfg.merge.multiplier, "Dispersion multiplier in the critical value")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_flag("--no-standardize", flags.no_standardize, "Use raw features instead of z-scores");
    cmd->add_option("--seed", cfg.seed, "Seed (k-means initialization)")->capture_default_str();
    cmd->add_option("--max-iter", cfg.kmeans_max_iter, "k-means iteration limit")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void resolve(const PipelineFlags& flags, PipelineConfig& cfg) {
    cfg.init = *iclust::parse_init_method(flags.init);
    cfg.k_init = iclust::KInitRule::parse(flags.k_init);
    cfg.merge.cv_strategy = *iclust::parse_cv_strategy(flags.cv);
    cfg.standardize = !flags.no_standardize;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustering of imbalanced data by LOF-guided merging of an over-clustering"};
    app.require_subcommand(0, 1);
    bool show_version = false;
    app.add_flag("--version", show_version, "Print version and algorithm defaults");

    // cluster
    iclust::cli::ClusterOptions cluster;
    PipelineFlags cluster_flags;
    std::string partition_path;
    auto* c = app.add_subcommand("cluster", "Cluster a CSV dataset");
    c->add_option("input", cluster.input, "Input CSV with header")->required();
    c->add_option("--label-column", cluster.label_column, "Ground-truth column (excluded from features)");
    c->add_option("--partition", partition_path, "Initial partition CSV for --init external");
    c->add_option("-o,--output-prefix", cluster.output_prefix, "Prefix for output files")->capture_default_str();
    add_pipeline_flags(c, cluster_flags, cluster.pipeline);

    // lof
    iclust::cli::LofOptions lof;
    bool lof_no_standardize = false;
    std::size_t lof_q = 0;
    auto* l = app.add_subcommand("lof", "Local Outlier Factor scores over the whole dataset");
    l->add_option("input", lof.input, "Input CSV with header")->required();
    l->add_option("--label-column", lof.label_column, "Column to exclude from features");
    l->add_option("--q", lof_q, "Single neighborhood size")->check(CLI::PositiveNumber);
    l->add_option("--q-max", lof.q_max, "Profile over q = 1..q_max")->check(CLI::PositiveNumber)->capture_default_str();
    l->add_flag("--no-standardize", lof_no_standardize, "Use raw features instead of z-scores");
    l->add_option("-o,--output", lof.output, "Output CSV")->capture_default_str();

    // eval
    iclust::cli::EvalOptions ev;
    std::string eval_out;
    auto* e = app.add_subcommand("eval", "Evaluate a partition against ground truth");
    e->add_option("predicted", ev.predicted, "row_index,cluster_id CSV")->required();
    e->add_option("truth", ev.truth, "row_index,label CSV")->required();
    e->add_option("--small-threshold", ev.small_threshold, "Groups of at most this size are small")
        ->capture_default_str();
    e->add_option("-o,--output", eval_out, "Write the report here instead of stdout");

    // sample
    iclust::cli::SampleOptions sample;
    auto* s = app.add_subcommand("sample", "Draw imbalanced subsamples");
    s->add_option("input", sample.input, "Input CSV with header")->required();
    s->add_option("--label-column", sample.label_column, "Group column")->required();
    s->add_option("--sizes", sample.sizes, "Group sizes, e.g. 100,75,50,4,3")->delimiter(',')->required();
    s->add_option("--pin", sample.pinned_labels, "Source group per slot instead of random groups")->delimiter(',');
    s->add_option("--replications", sample.replications, "Number of samples")->capture_default_str();
    s->add_option("--seed", sample.seed, "Seed")->capture_default_str();
    s->add_option("-o,--output-prefix", sample.output_prefix, "Writes <prefix>_<i>.csv")->capture_default_str();

    // bench
    iclust::cli::BenchOptions bench;
    PipelineFlags bench_flags;
    std::size_t bench_threshold = 0;
    std::string presets_help = "Sampling design:";
    for (const auto& p : iclust::bench_presets()) {
        presets_help += " " + p.name;
    }
    auto* b = app.add_subcommand("bench", "Seeded replications of an imbalanced sampling design");
    b->add_option("--preset", bench.preset, presets_help);
    b->add_option("--sizes", bench.sizes, "Custom group sizes")->delimiter(',');
    b->add_option("--source", bench.source, "Labeled source CSV")->required();
    b->add_option("--label-column", bench.label_column, "Group column")->required();
    b->add_option("--replications", bench.replications, "Replications")->capture_default_str();
    b->add_option("--bench-seed", bench.seed, "Sampling seed")->capture_default_str();
    b->add_option("--small-threshold", bench_threshold, "Override the design's small-group threshold");
    b->add_flag("--standardize-before-sampling", bench.standardize_before_sampling,
                "Standardize the source once instead of each sample");
    b->add_option("--threads", bench.threads, "Worker threads (default: ICLUST_THREADS or 1)");
    b->add_option("-o,--output-prefix", bench.output_prefix, "Writes <prefix>.long.csv and <prefix>.aggregate.json")
        ->capture_default_str();
    add_pipeline_flags(b, bench_flags, bench.pipeline);
    bench.threads = iclust::default_thread_count();

    CLI11_PARSE(app, argc, argv);

    if (show_version) {
        std::cout << iclust::cli::version_text();
        return 0;
    }
    try {
        if (c->parsed()) {
            resolve(cluster_flags, cluster.pipeline);
            if (!partition_path.empty()) {
                cluster.external_partition = partition_path;
            }
            return iclust::cli::cmd_cluster(cluster, std::cout, std::cerr);
        }
        if (l->parsed()) {
            lof.standardize = !lof_no_standardize;
            if (lof_q > 0) {
                lof.q = lof_q;
            }
            return iclust::cli::cmd_lof(lof, std::cout, std::cerr);
        }
        if (e->parsed()) {
            if (!eval_out.empty()) {
                ev.output = eval_out;
            }
            return iclust::cli::cmd_eval(ev, std::cout, std::cerr);
        }
        if (s->parsed()) {
            return iclust::cli::cmd_sample(sample, std::cout, std::cerr);
        }
        if (b->parsed()) {
            resolve(bench_flags, bench.pipeline);
            if (bench_threshold > 0) {
                bench.small_threshold = bench_threshold;
            }
            return iclust::cli::cmd_bench(bench, std::cout, std::cerr);
        }
    } catch (const std::exception& ex) {
        std::cerr << "{\"level\":\"error\",\"message\":" << nlohmann::json(ex.what()).dump() << "}\n";
        return 1;
    }
    std::cout << app.help();
    return 0;
}
