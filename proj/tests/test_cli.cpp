#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "iclust/bench.hpp"
#include "iclust/commands.hpp"
#include "iclust/error.hpp"
#include "iclust/partition.hpp"
#include "support.hpp"

using namespace iclust;
using iclust::testing::Gen;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "iclust_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Three separated 2-D groups of sizes 70/20/10 written as a labeled CSV.
fs::path toy_csv() {
    const auto path = scratch("toy.csv");
    Gen g(61);
    const auto b = iclust::testing::gaussian_blobs(g, {70, 20, 10}, {{0, 0}, {12, 0}, {0, 12}}, 1.0);
    write_csv(path, LabeledDataset(b.data, b.labels), {"x", "y"}, std::string("group"));
    return path;
}

void write_labels(const fs::path& path, const std::vector<std::string>& labels) {
    std::ofstream f(path);
    f << "row_index,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        f << i << ',' << labels[i] << '\n';
    }
}

}  // namespace

TEST_CASE("partition csv round trip and validation") {
    const Partition p({4, 4, 1, 9, 1});
    const auto path = scratch("part.csv");
    write_partition_csv(path, p);
    CHECK(read_partition_csv(path) == p);

    std::ofstream(scratch("gap.csv")) << "row_index,cluster_id\n0,1\n2,1\n";
    CHECK_THROWS_AS(read_partition_csv(scratch("gap.csv")), Error);
    std::ofstream(scratch("dup.csv")) << "row_index,cluster_id\n0,1\n0,2\n";
    CHECK_THROWS_AS(read_partition_csv(scratch("dup.csv")), Error);
}

TEST_CASE("partition bookkeeping") {
    Partition p({3, 1, 3, 2});
    CHECK(p.k() == 3);
    CHECK(p.members(3) == std::vector<std::size_t>{0, 2});
    p.merge(1, 3);
    CHECK(p.k() == 2);
    CHECK(p[0] == 1);
    CHECK(p.members(1) == std::vector<std::size_t>{0, 1, 2});
    CHECK(!p.contains(3));
    CHECK(same_grouping(p, Partition({0, 0, 0, 5})));
    CHECK(p.relabeled() == Partition({0, 0, 0, 1}));
    CHECK_THROWS_AS(p.merge(1, 1), Error);
    CHECK_THROWS_AS(p.merge(1, 8), Error);
}

TEST_CASE("cluster command on the three-group toy") {
    // 47 initial clusters of about two points each; merges keep every cluster pure
    cli::ClusterOptions opt;
    opt.input = toy_csv();
    opt.label_column = "group";
    opt.output_prefix = scratch("toy").string();
    std::ostringstream out;
    std::ostringstream diag;
    REQUIRE(cli::cmd_cluster(opt, out, diag) == 0);
    const auto summary = nlohmann::json::parse(slurp(opt.output_prefix + ".summary.json"));
    CHECK(summary["k_init"] == 47);
    CHECK(summary["evaluation"]["H"] == 1.0);
    CHECK(summary["k_final"].get<std::size_t>() + summary["merges"].get<std::size_t>() == 47);
    const auto part = read_partition_csv(opt.output_prefix + ".assignments.csv");
    CHECK(part.size() == 100);
    CHECK(part.k() == summary["k_final"].get<std::size_t>());
    std::istringstream trace_lines(slurp(opt.output_prefix + ".trace.jsonl"));
    std::size_t events = 0;
    for (std::string line; std::getline(trace_lines, line);) {
        ++events;
    }
    CHECK(events == summary["merges"].get<std::size_t>() + summary["rejections"].get<std::size_t>());

    // identical configuration gives a byte-identical trace
    const std::string trace = slurp(opt.output_prefix + ".trace.jsonl");
    REQUIRE(cli::cmd_cluster(opt, out, diag) == 0);
    CHECK(slurp(opt.output_prefix + ".trace.jsonl") == trace);
}

TEST_CASE("cluster command with a single initial cluster") {
    cli::ClusterOptions opt;
    opt.input = toy_csv();
    opt.label_column = "group";
    opt.pipeline.k_init = KInitRule::parse("1");
    opt.output_prefix = scratch("one").string();
    std::ostringstream out;
    std::ostringstream diag;
    REQUIRE(cli::cmd_cluster(opt, out, diag) == 0);
    CHECK(slurp(opt.output_prefix + ".trace.jsonl").empty());
    CHECK(read_partition_csv(opt.output_prefix + ".assignments.csv").k() == 1);
}

TEST_CASE("cluster command with an external perfect partition keeps it") {
    const auto path = toy_csv();
    const auto ds = load_csv(path, std::string("group"));
    std::vector<ClusterId> truth(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        truth[i] = static_cast<ClusterId>(ds.labels[i].back() - '0');
    }
    write_partition_csv(scratch("truth_part.csv"), Partition(truth));

    cli::ClusterOptions opt;
    opt.input = path;
    opt.label_column = "group";
    opt.pipeline.init = InitMethod::external;
    opt.external_partition = scratch("truth_part.csv");
    opt.output_prefix = scratch("ext").string();
    std::ostringstream out;
    std::ostringstream diag;
    REQUIRE(cli::cmd_cluster(opt, out, diag) == 0);
    CHECK(same_grouping(read_partition_csv(opt.output_prefix + ".assignments.csv"), Partition(truth)));
}

TEST_CASE("missing input reports the path") {
    cli::ClusterOptions opt;
    opt.input = "/nonexistent/dir/input.csv";
    opt.output_prefix = scratch("missing").string();
    std::ostringstream out;
    std::ostringstream diag;
    CHECK(cli::cmd_cluster(opt, out, diag) != 0);
    const auto err = nlohmann::json::parse(diag.str());
    CHECK(err["level"] == "error");
    CHECK(err["message"].get<std::string>().find("/nonexistent/dir/input.csv") != std::string::npos);
}

TEST_CASE("eval command") {
    const auto truth = scratch("truth.csv");
    write_labels(truth, {"a", "a", "a", "b"});
    std::ostringstream out;
    std::ostringstream diag;

    SUBCASE("prediction equals truth") {
        cli::EvalOptions opt{truth, truth, 10, std::nullopt};
        REQUIRE(cli::cmd_eval(opt, out, diag) == 0);
        const auto j = nlohmann::json::parse(out.str());
        CHECK(j["report"]["P"] == 1.0);
        CHECK(j["report"]["F"] == 1.0);
        CHECK(j["report"]["V"] == 1.0);
    }
    SUBCASE("one cluster") {
        const auto pred = scratch("pred_one.csv");
        write_labels(pred, {"0", "0", "0", "0"});
        cli::EvalOptions opt{pred, truth, 10, std::nullopt};
        REQUIRE(cli::cmd_eval(opt, out, diag) == 0);
        const auto j = nlohmann::json::parse(out.str());
        CHECK(j["report"]["C"] == 1.0);
        CHECK(j["report"]["F"].get<double>() == doctest::Approx(0.742857142857));
        CHECK(j["baselines"]["one_cluster"]["F"].get<double>() == doctest::Approx(0.742857142857));
    }
    SUBCASE("row mismatch") {
        const auto pred = scratch("pred_short.csv");
        write_labels(pred, {"0", "0"});
        cli::EvalOptions opt{pred, truth, 10, std::nullopt};
        CHECK(cli::cmd_eval(opt, out, diag) != 0);
    }
}

TEST_CASE("lof command writes one row per observation") {
    cli::LofOptions opt;
    opt.input = toy_csv();
    opt.label_column = "group";
    opt.output = scratch("lof.csv");
    std::ostringstream out;
    std::ostringstream diag;
    REQUIRE(cli::cmd_lof(opt, out, diag) == 0);
    std::istringstream rows(slurp(opt.output));
    std::string line;
    std::getline(rows, line);
    CHECK(line == "row_index,lof_q1,lof_q2,lof_q3,lof_q4,lof_q5,representative");
    std::size_t count = 0;
    while (std::getline(rows, line)) {
        ++count;
    }
    CHECK(count == 100);
}

TEST_CASE("sample command") {
    cli::SampleOptions opt;
    opt.input = toy_csv();
    opt.label_column = "group";
    opt.sizes = {5, 3, 1};
    opt.replications = 2;
    opt.seed = 9;
    opt.output_prefix = scratch("smp").string();
    std::ostringstream out;
    std::ostringstream diag;
    REQUIRE(cli::cmd_sample(opt, out, diag) == 0);
    for (int r = 0; r < 2; ++r) {
        const auto ds = load_csv(opt.output_prefix + "_" + std::to_string(r) + ".csv", std::string("group"));
        CHECK(ds.size() == 9);
    }
}

TEST_CASE("bench presets") {
    std::size_t audio = 0;
    for (auto s : find_preset("audio")->group_sizes) {
        audio += s;
    }
    CHECK(audio == 241);
    std::size_t pen = 0;
    for (auto s : find_preset("pen")->group_sizes) {
        pen += s;
    }
    CHECK(pen == 2410);
    CHECK(find_preset("nope") == nullptr);
}

TEST_CASE("bench is deterministic and independent of the thread count") {
    const auto path = toy_csv();
    cli::BenchOptions opt;
    opt.sizes = {10, 5, 2};
    opt.source = path;
    opt.label_column = "group";
    opt.replications = 4;
    opt.seed = 5;
    opt.output_prefix = scratch("bench_a").string();
    std::ostringstream out;
    std::ostringstream diag;
    REQUIRE(cli::cmd_bench(opt, out, diag) == 0);
    opt.output_prefix = scratch("bench_b").string();
    opt.threads = 3;
    REQUIRE(cli::cmd_bench(opt, out, diag) == 0);
    CHECK(slurp(scratch("bench_a.aggregate.json")) == slurp(scratch("bench_b.aggregate.json")));
    CHECK(slurp(scratch("bench_a.long.csv")) == slurp(scratch("bench_b.long.csv")));

    const auto agg = nlohmann::json::parse(slurp(scratch("bench_a.aggregate.json")));
    CHECK(agg["stages"]["iclust"]["P"]["count"] == 4);
    CHECK(agg["stages"]["one_cluster"]["C"]["median"] == 1.0);
}

TEST_CASE("bench rejects an unknown preset and a missing source") {
    cli::BenchOptions opt;
    opt.preset = "nope";
    opt.source = toy_csv();
    opt.label_column = "group";
    std::ostringstream out;
    std::ostringstream diag;
    CHECK(cli::cmd_bench(opt, out, diag) != 0);
    opt.preset = "audio";
    opt.source = "/nonexistent.csv";
    CHECK(cli::cmd_bench(opt, out, diag) != 0);
}

TEST_CASE("quantile summary uses linear interpolation") {
    const auto s = summarize({4, 1, 3, 2});
    CHECK(s.min == 1.0);
    CHECK(s.q1 == 1.75);
    CHECK(s.median == 2.5);
    CHECK(s.q3 == 3.25);
    CHECK(s.max == 4.0);
    CHECK(summarize({}).count == 0);
}

TEST_CASE("version text names the defaults") {
    const auto v = cli::version_text();
    CHECK(v.find("q_max=5") != std::string::npos);
    CHECK(v.find("ward") != std::string::npos);
}
