#include "iclust/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "iclust/bench.hpp"
#include "iclust/error.hpp"
#include "iclust/eval.hpp"
#include "iclust/lof.hpp"

namespace iclust::cli {

namespace {

void report_error(std::ostream& diag, const std::string& command, const std::string& message) {
    nlohmann::ordered_json j;
    j["level"] = "error";
    j["command"] = command;
    j["message"] = message;
    diag << j.dump() << '\n';
}

void report_warnings(std::ostream& diag, const std::vector<Warning>& warnings) {
    for (const auto& w : warnings) {
        nlohmann::ordered_json j;
        j["level"] = "warning";
        j["code"] = w.code;
        j["message"] = w.message;
        if (w.column) {
            j["column"] = *w.column;
        } else {
            j["column"] = nullptr;
        }
        diag << j.dump() << '\n';
    }
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) {
        throw Error("cannot write " + path.string());
    }
    return f;
}

std::string format_double(double v) {
    if (!std::isfinite(v)) {
        return v > 0 ? "inf" : "nan";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, ptr};
}

template <typename Fn>
int guarded(const char* command, std::ostream& diag, Fn fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        report_error(diag, command, e.what());
        return 1;
    }
}

}  // namespace

std::string version_text() {
    return "iclust " ICLUST_VERSION
           "\n"
           "defaults: init=ward (Lance-Williams on squared distances), k_init=ceil(10*ln(n)), q_max=5, "
           "cv=cv1 (median + 2 * 1.4826 * MAD of LOF_q), standardize=on\n";
}

int cmd_cluster(const ClusterOptions& opt, std::ostream& out, std::ostream& diag) {
    return guarded("cluster", diag, [&] {
        const auto ds = load_csv(opt.input, opt.label_column);
        PipelineConfig cfg = opt.pipeline;
        if (cfg.init == InitMethod::external) {
            if (!opt.external_partition) {
                throw Error("--init external requires --partition");
            }
            cfg.external_partition = read_partition_csv(*opt.external_partition);
        }
        const auto res = run_pipeline(ds.matrix, cfg);
        report_warnings(diag, res.warnings);

        const std::string prefix = opt.output_prefix;
        write_partition_csv(prefix + ".assignments.csv", res.final_partition());
        {
            auto f = open_output(prefix + ".trace.jsonl");
            write_trace_jsonl(f, res.trace);
        }
        nlohmann::ordered_json summary;
        summary["input"] = opt.input.string();
        summary["n"] = ds.matrix.rows();
        summary["p"] = ds.matrix.cols();
        summary["standardize"] = cfg.standardize;
        summary["init"] = std::string(to_string(cfg.init));
        summary["k_init_rule"] = cfg.init == InitMethod::external ? "external" : cfg.k_init.describe();
        summary["k_init"] = res.k_init;
        summary["k_final"] = res.final_partition().k();
        summary["merges"] = res.trace.merges;
        summary["rejections"] = res.trace.rejections;
        summary["q_max"] = cfg.merge.q_max_cap;
        summary["cv"] = std::string(to_string(cfg.merge.cv_strategy));
        summary["mad_scale"] = cfg.merge.mad_scale;
        summary["multiplier"] = cfg.merge.multiplier;
        summary["seed"] = cfg.seed;
        if (ds.labels.front() != kUnlabeled || distinct_labels(ds.labels).size() > 1) {
            summary["evaluation"] = to_json(evaluate(ds.labels, res.final_partition()));
        }
        summary["timings"] = {{"distances_s", res.seconds_distances},
                              {"init_s", res.seconds_init},
                              {"merge_s", res.seconds_merge}};
        {
            auto f = open_output(prefix + ".summary.json");
            f << summary.dump(2) << '\n';
        }
        out << "k_init=" << res.k_init << " k_final=" << res.final_partition().k() << " merges=" << res.trace.merges
            << " rejections=" << res.trace.rejections << '\n';
        return 0;
    });
}

int cmd_lof(const LofOptions& opt, std::ostream& out, std::ostream& diag) {
    return guarded("lof", diag, [&] {
        const auto ds = load_csv(opt.input, opt.label_column);
        DataMatrix work = ds.matrix;
        if (opt.standardize) {
            auto s = standardize(ds.matrix);
            report_warnings(diag, s.warnings);
            work = std::move(s.matrix);
        }
        const auto dm = pairwise_distances(work);
        std::vector<std::size_t> scope(ds.size());
        for (std::size_t i = 0; i < scope.size(); ++i) {
            scope[i] = i;
        }
        auto f = open_output(opt.output);
        if (opt.q) {
            const auto scores = lof_scores(dm, scope, *opt.q);
            f << "row_index,lof_q" << *opt.q << ",representative\n";
            for (std::size_t i = 0; i < scores.size(); ++i) {
                f << i << ',' << format_double(scores[i]) << ',' << format_double(scores[i]) << '\n';
            }
        } else {
            const auto prof = lof_profile(dm, scope, opt.q_max);
            f << "row_index";
            for (std::size_t q = 1; q <= opt.q_max; ++q) {
                f << ",lof_q" << q;
            }
            f << ",representative\n";
            for (std::size_t i = 0; i < prof.size(); ++i) {
                f << i;
                for (double s : prof.scores_of(i)) {
                    f << ',' << format_double(s);
                }
                f << ',' << format_double(prof.representative[i]) << '\n';
            }
        }
        out << "scored " << ds.size() << " rows -> " << opt.output.string() << '\n';
        return 0;
    });
}

std::vector<std::string> read_label_csv(const std::filesystem::path& path) {
    const std::string name = path.string();
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + name);
    }
    std::string line;
    std::size_t row = 0;
    bool header = true;
    std::vector<std::pair<std::size_t, std::string>> entries;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (header) {
            header = false;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(name, row, 1, "expected row_index,label");
        }
        std::size_t idx = 0;
        const std::string head = line.substr(0, comma);
        auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
        if (head.empty() || ec != std::errc() || ptr != head.data() + head.size()) {
            throw ParseError(name, row, 1, "expected a row index, found '" + head + "'");
        }
        entries.emplace_back(idx, line.substr(comma + 1));
    }
    if (entries.empty()) {
        throw Error(name + ": no rows");
    }
    std::vector<std::string> labels(entries.size());
    std::vector<bool> seen(entries.size(), false);
    for (auto& [idx, label] : entries) {
        if (idx >= entries.size()) {
            throw Error(name + ": unknown row index " + std::to_string(idx));
        }
        if (seen[idx]) {
            throw Error(name + ": row index " + std::to_string(idx) + " appears twice");
        }
        seen[idx] = true;
        labels[idx] = std::move(label);
    }
    return labels;
}

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& diag) {
    return guarded("eval", diag, [&] {
        const auto predicted = read_label_csv(opt.predicted);
        const auto truth = read_label_csv(opt.truth);
        if (predicted.size() != truth.size()) {
            throw Error("row mismatch: prediction has " + std::to_string(predicted.size()) + " rows, truth has " +
                        std::to_string(truth.size()));
        }
        const auto table = ContingencyTable::from_labels(truth, predicted);
        const auto base = extreme_baselines(truth, opt.small_threshold);
        nlohmann::ordered_json j;
        j["small_threshold"] = opt.small_threshold;
        j["report"] = to_json(evaluate(table, opt.small_threshold));
        j["baselines"] = {{"all_singletons", to_json(base.all_singletons)}, {"one_cluster", to_json(base.one_cluster)}};
        if (opt.output) {
            auto f = open_output(*opt.output);
            f << j.dump(2) << '\n';
        } else {
            out << j.dump(2) << '\n';
        }
        return 0;
    });
}

int cmd_sample(const SampleOptions& opt, std::ostream& out, std::ostream& diag) {
    return guarded("sample", diag, [&] {
        const auto ds = load_csv(opt.input, opt.label_column);
        SamplingSpec spec;
        spec.group_sizes = opt.sizes;
        spec.replications = opt.replications;
        spec.seed = opt.seed;
        spec.pinned_labels = opt.pinned_labels;
        const auto samples = sample_imbalanced(ds, spec);
        for (std::size_t r = 0; r < samples.size(); ++r) {
            const std::string path = opt.output_prefix + "_" + std::to_string(r) + ".csv";
            write_csv(path, samples[r], {}, opt.label_column);
            out << path << " n=" << samples[r].size() << '\n';
        }
        return 0;
    });
}

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& diag) {
    return guarded("bench", diag, [&] {
        BenchSpec spec;
        if (!opt.preset.empty()) {
            const BenchPreset* preset = find_preset(opt.preset);
            if (!preset) {
                throw Error("unknown preset '" + opt.preset + "'");
            }
            spec = spec_from_preset(*preset);
        } else if (opt.sizes.empty()) {
            throw Error("bench needs --preset or --sizes");
        } else {
            spec.name = "custom";
        }
        if (!opt.sizes.empty()) {
            spec.group_sizes = opt.sizes;
        }
        if (!std::filesystem::exists(opt.source)) {
            throw Error("source dataset " + opt.source.string() + " does not exist");
        }
        spec.replications = opt.replications;
        spec.seed = opt.seed;
        if (opt.small_threshold) {
            spec.small_threshold = *opt.small_threshold;
        }
        spec.standardize_before_sampling = opt.standardize_before_sampling;
        spec.pipeline = opt.pipeline;
        spec.threads = opt.threads;
        if (spec.pipeline.init == InitMethod::external) {
            throw Error("bench does not support external initialization");
        }

        const auto source = load_csv(opt.source, opt.label_column);
        const auto result = run_bench(source, spec);
        {
            auto f = open_output(opt.output_prefix + ".long.csv");
            write_long_csv(f, result);
        }
        {
            auto f = open_output(opt.output_prefix + ".aggregate.json");
            f << aggregate_json(result).dump(2) << '\n';
        }
        for (const auto& r : result.replications) {
            out << "replication " << r.replication << ": n=" << r.n << " k_init=" << r.k_init
                << " k_final=" << r.final.k_detected << '\n';
        }
        return 0;
    });
}

}  // namespace iclust::cli
