#include "iclust/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "iclust/error.hpp"
#include "iclust/rng.hpp"

namespace iclust {

const std::vector<BenchPreset>& bench_presets() {
    static const std::vector<BenchPreset> presets = {
        {"audio", "3 big + 7 small groups, n = 241", {100, 75, 50, 4, 3, 3, 2, 2, 1, 1}, 4},
        {"pen", "3 big + 7 small groups, n = 2410", {1000, 750, 500, 40, 30, 30, 20, 20, 10, 10}, 40},
        {"har", "3 big + 3 small groups, n = 468", {200, 150, 100, 8, 6, 4}, 8},
        {"satellite", "3 big + 3 small groups, n = 669", {300, 225, 150, 12, 9, 3}, 12},
        {"kinit", "3 big + 4 small groups, n = 235 (initial-cluster study)", {100, 75, 50, 4, 3, 2, 1}, 4},
    };
    return presets;
}

const BenchPreset* find_preset(const std::string& name) {
    for (const auto& p : bench_presets()) {
        if (p.name == name) {
            return &p;
        }
    }
    return nullptr;
}

BenchSpec spec_from_preset(const BenchPreset& preset) {
    BenchSpec s;
    s.name = preset.name;
    s.group_sizes = preset.group_sizes;
    s.small_threshold = preset.small_threshold;
    return s;
}

namespace {

ReplicationResult run_replication(const LabeledDataset& ds, std::size_t rep, const BenchSpec& spec,
                                  bool standardize_sample) {
    PipelineConfig cfg = spec.pipeline;
    cfg.standardize = standardize_sample;
    cfg.seed = derive_seed(spec.pipeline.seed ^ spec.seed, rep);
    const auto res = run_pipeline(ds.matrix, cfg);
    ReplicationResult r;
    r.replication = rep;
    r.n = ds.size();
    r.k_init = res.k_init;
    r.merges = res.trace.merges;
    r.initial = evaluate(ds.labels, res.initial, spec.small_threshold);
    r.final = evaluate(ds.labels, res.final_partition(), spec.small_threshold);
    r.baselines = extreme_baselines(ds.labels, spec.small_threshold);
    return r;
}

}  // namespace

BenchResult run_bench(const LabeledDataset& source, const BenchSpec& spec) {
    SamplingSpec sampling;
    sampling.group_sizes = spec.group_sizes;
    sampling.replications = spec.replications;
    sampling.seed = spec.seed;

    std::vector<LabeledDataset> samples;
    if (spec.standardize_before_sampling) {
        auto s = standardize(source.matrix);
        samples = sample_imbalanced(LabeledDataset(std::move(s.matrix), source.labels), sampling);
    } else {
        samples = sample_imbalanced(source, sampling);
    }
    const bool standardize_sample = spec.pipeline.standardize && !spec.standardize_before_sampling;

    BenchResult out;
    out.spec = spec;
    out.replications.resize(samples.size());
    const std::size_t workers = std::clamp<std::size_t>(spec.threads, 1, samples.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t rep = next++; rep < samples.size(); rep = next++) {
            try {
                out.replications[rep] = run_replication(samples[rep], rep, spec, standardize_sample);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, ptr};
}

const std::vector<std::pair<std::string, const EvaluationReport ReplicationResult::*>>& stage_reports() {
    static const std::vector<std::pair<std::string, const EvaluationReport ReplicationResult::*>> stages = {
        {"initial", &ReplicationResult::initial},
        {"iclust", &ReplicationResult::final},
    };
    return stages;
}

template <typename Fn>
void for_each_stage(const ReplicationResult& r, Fn fn) {
    for (const auto& [name, member] : stage_reports()) {
        fn(name, r.*member);
    }
    fn("all_singletons", r.baselines.all_singletons);
    fn("one_cluster", r.baselines.one_cluster);
}

}  // namespace

void write_long_csv(std::ostream& out, const BenchResult& result) {
    out << "replication,stage,metric,value\n";
    for (const auto& r : result.replications) {
        for_each_stage(r, [&](const std::string& stage, const EvaluationReport& rep) {
            for (const auto& [metric, value] : metric_values(rep)) {
                out << r.replication << ',' << stage << ',' << metric << ',' << (value ? format_double(*value) : "NA")
                    << '\n';
            }
        });
    }
}

Summary summarize(std::vector<double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) {
        return s;
    }
    std::sort(values.begin(), values.end());
    auto quantile = [&](double prob) {
        const double h = (static_cast<double>(values.size()) - 1.0) * prob;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    s.min = values.front();
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.q3 = quantile(0.75);
    s.max = values.back();
    return s;
}

nlohmann::ordered_json aggregate_json(const BenchResult& result) {
    nlohmann::ordered_json j;
    j["name"] = result.spec.name;
    j["replications"] = result.spec.replications;
    j["seed"] = result.spec.seed;
    j["group_sizes"] = result.spec.group_sizes;
    j["small_threshold"] = result.spec.small_threshold;
    j["standardize_before_sampling"] = result.spec.standardize_before_sampling;

    std::vector<std::string> stage_order;
    std::map<std::string, std::map<std::string, std::vector<double>>> samples;
    std::vector<std::string> metric_order;
    for (const auto& r : result.replications) {
        for_each_stage(r, [&](const std::string& stage, const EvaluationReport& rep) {
            if (std::find(stage_order.begin(), stage_order.end(), stage) == stage_order.end()) {
                stage_order.push_back(stage);
            }
            for (const auto& [metric, value] : metric_values(rep)) {
                if (std::find(metric_order.begin(), metric_order.end(), metric) == metric_order.end()) {
                    metric_order.push_back(metric);
                }
                auto& bucket = samples[stage][metric];
                if (value) {
                    bucket.push_back(*value);
                }
            }
        });
    }
    nlohmann::ordered_json stages = nlohmann::ordered_json::object();
    for (const auto& stage : stage_order) {
        nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
        for (const auto& metric : metric_order) {
            const Summary s = summarize(samples[stage][metric]);
            nlohmann::ordered_json m;
            m["count"] = s.count;
            if (s.count == 0) {
                m["min"] = m["q1"] = m["median"] = m["q3"] = m["max"] = nullptr;
            } else {
                m["min"] = s.min;
                m["q1"] = s.q1;
                m["median"] = s.median;
                m["q3"] = s.q3;
                m["max"] = s.max;
            }
            metrics[metric] = std::move(m);
        }
        stages[stage] = std::move(metrics);
    }
    j["stages"] = std::move(stages);
    return j;
}

std::size_t default_thread_count() {
    if (const char* env = std::getenv("ICLUST_THREADS")) {
        std::size_t v = 0;
        const std::string s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) {
            return v;
        }
    }
    return 1;
}

}  // namespace iclust
