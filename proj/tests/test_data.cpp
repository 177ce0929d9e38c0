#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "iclust/data.hpp"
#include "iclust/error.hpp"
#include "iclust/rng.hpp"
#include "support.hpp"

using namespace iclust;
using iclust::testing::Gen;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / ("iclust_test_" + name);
    std::ofstream(path, std::ios::binary) << content;
    return path;
}

LabeledDataset toy_labeled(std::size_t per_group, std::size_t groups) {
    std::vector<double> v;
    std::vector<std::string> labels;
    for (std::size_t g = 0; g < groups; ++g) {
        for (std::size_t i = 0; i < per_group; ++i) {
            v.push_back(static_cast<double>(g * 1000 + i));
            labels.push_back("L" + std::to_string(g));
        }
    }
    return {DataMatrix(labels.size(), 1, std::move(v)), std::move(labels)};
}

}  // namespace

TEST_CASE("load_csv parses a plain numeric file") {
    const auto path = write_temp("plain.csv", "a,b\n1,2\n3,4\n5,6\n");
    const auto ds = load_csv(path);
    CHECK(ds.matrix.rows() == 3);
    CHECK(ds.matrix.cols() == 2);
    CHECK(ds.matrix(2, 1) == 6.0);
    CHECK(ds.labels == std::vector<std::string>(3, kUnlabeled));
}

TEST_CASE("load_csv separates the label column and tolerates CRLF, BOM and quotes") {
    const auto path = write_temp("labeled.csv", "\xEF\xBB\xBFx,\"cls\",y\r\n1.5,\"a,b\",2\r\n\r\n-3,c,4e1\r\n");
    const auto ds = load_csv(path, std::string("cls"));
    REQUIRE(ds.matrix.rows() == 2);
    CHECK(ds.matrix.cols() == 2);
    CHECK(ds.matrix(1, 1) == 40.0);
    CHECK(ds.labels[0] == "a,b");
    CHECK(ds.labels[1] == "c");
}

TEST_CASE("load_csv rejects NaN with row and column") {
    const auto path = write_temp("nan.csv", "a,b\n1,2\n3,NaN\n");
    try {
        load_csv(path);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 3);
        CHECK(e.column() == 2);
        CHECK(std::string(e.what()).find("nan.csv") != std::string::npos);
    }
}

TEST_CASE("load_csv error cases") {
    CHECK_THROWS_AS(load_csv(write_temp("ragged.csv", "a,b\n1,2\n3\n")), ParseError);
    CHECK_THROWS_AS(load_csv(write_temp("text.csv", "a,b\n1,x\n")), ParseError);
    CHECK_THROWS_AS(load_csv(write_temp("empty.csv", "")), Error);
    CHECK_THROWS_AS(load_csv(write_temp("header_only.csv", "a,b\n")), Error);
    CHECK_THROWS_AS(load_csv(write_temp("nolabel.csv", "a,b\n1,2\n"), std::string("cls")), Error);
    CHECK_THROWS_AS(load_csv("/nonexistent/iclust.csv"), Error);
}

TEST_CASE("write_csv and load_csv round trip") {
    Gen g(3);
    const auto m = iclust::testing::random_matrix(g, 7, 3);
    LabeledDataset ds(m, {"a", "b", "a", "c", "c", "b", "a"});
    const auto path = std::filesystem::temp_directory_path() / "iclust_test_roundtrip.csv";
    write_csv(path, ds, {}, std::string("label"));
    const auto back = load_csv(path, std::string("label"));
    CHECK(back.labels == ds.labels);
    CHECK(back.matrix.values() == m.values());
}

TEST_CASE("pen-digits source file") {
    const auto ds = load_csv(std::filesystem::path(ICLUST_DATA_DIR) / "pendigits.csv", std::string("digit"));
    CHECK(ds.matrix.rows() == 10992);
    CHECK(ds.matrix.cols() == 16);
    CHECK(distinct_labels(ds.labels).size() == 10);
}

TEST_CASE("standardize examples") {
    SUBCASE("(1,2,3) becomes (-1,0,1)") {
        const auto s = standardize(DataMatrix(3, 1, {1, 2, 3}));
        CHECK(s.matrix(0, 0) == doctest::Approx(-1.0));
        CHECK(s.matrix(1, 0) == doctest::Approx(0.0));
        CHECK(s.matrix(2, 0) == doctest::Approx(1.0));
        CHECK(s.means[0] == 2.0);
        CHECK(s.sds[0] == 1.0);
        CHECK(s.warnings.empty());
    }
    SUBCASE("constant column is zeroed with a warning") {
        const auto s = standardize(DataMatrix(3, 2, {5, 1, 5, 2, 5, 3}));
        CHECK(s.matrix(0, 0) == 0.0);
        CHECK(s.matrix(2, 0) == 0.0);
        CHECK(s.constant_columns == std::vector<std::size_t>{0});
        REQUIRE(s.warnings.size() == 1);
        CHECK(s.warnings[0].code == "constant_column");
        CHECK(s.warnings[0].column == 0u);
    }
}

TEST_CASE("standardize moments and inverse on random matrices") {
    Gen g(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = g.index(2, 40);
        const std::size_t p = g.index(1, 6);
        const auto m = iclust::testing::random_matrix(g, n, p, -100.0, 100.0);
        const auto s = standardize(m);
        for (std::size_t j = 0; j < p; ++j) {
            double mu = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                mu += s.matrix(i, j);
            }
            mu /= static_cast<double>(n);
            double ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                ss += (s.matrix(i, j) - mu) * (s.matrix(i, j) - mu);
            }
            CHECK(std::abs(mu) < 1e-9);
            CHECK(std::abs(std::sqrt(ss / static_cast<double>(n - 1)) - 1.0) < 1e-9);
        }
        const auto back = destandardize(s);
        for (std::size_t k = 0; k < m.values().size(); ++k) {
            CHECK(back.values()[k] == doctest::Approx(m.values()[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("DataMatrix rejects bad shapes and values") {
    CHECK_THROWS_AS(DataMatrix(2, 2, {1, 2, 3}), Error);
    CHECK_THROWS_AS(DataMatrix(0, 2, {}), Error);
    CHECK_THROWS_AS(DataMatrix(1, 1, {std::nan("")}), Error);
}

TEST_CASE("sample_imbalanced sizes and determinism") {
    const auto ds = toy_labeled(200, 10);
    SamplingSpec spec;
    spec.group_sizes = {100, 75, 50, 4, 3, 3, 2, 2, 1, 1};
    spec.replications = 10;
    spec.seed = 42;
    const auto a = sample_imbalanced(ds, spec);
    const auto b = sample_imbalanced(ds, spec);
    REQUIRE(a.size() == 10);
    for (std::size_t r = 0; r < a.size(); ++r) {
        CHECK(a[r].size() == 241);
        CHECK(a[r].labels == b[r].labels);
        CHECK(a[r].matrix.values() == b[r].matrix.values());

        // each slot maps to a distinct group with exactly its requested count
        std::map<std::string, std::size_t> counts;
        for (const auto& l : a[r].labels) {
            ++counts[l];
        }
        std::multiset<std::size_t> got;
        for (const auto& [l, c] : counts) {
            got.insert(c);
        }
        CHECK(got == std::multiset<std::size_t>(spec.group_sizes.begin(), spec.group_sizes.end()));

        // rows are drawn without replacement
        std::set<double> rows(a[r].matrix.values().begin(), a[r].matrix.values().end());
        CHECK(rows.size() == a[r].size());
    }
    CHECK(a[0].labels != a[1].labels);

    spec.seed = 43;
    CHECK(sample_imbalanced(ds, spec)[0].matrix.values() != a[0].matrix.values());
}

TEST_CASE("sample_imbalanced pen design sums to the slot sizes") {
    const auto ds = toy_labeled(1200, 10);
    SamplingSpec spec;
    spec.group_sizes = {1000, 750, 500, 40, 30, 30, 20, 20, 10, 10};
    spec.replications = 2;
    const auto out = sample_imbalanced(ds, spec);
    for (const auto& s : out) {
        CHECK(s.size() == 2410);
    }
}

TEST_CASE("sample_imbalanced pinned slots and errors") {
    const auto ds = toy_labeled(10, 3);
    SamplingSpec spec;
    spec.group_sizes = {5, 2};
    spec.pinned_labels = {"L2", "L0"};
    const auto out = sample_imbalanced(ds, spec);
    std::map<std::string, std::size_t> counts;
    for (const auto& l : out[0].labels) {
        ++counts[l];
    }
    CHECK(counts == std::map<std::string, std::size_t>{{"L0", 2}, {"L2", 5}});

    spec.pinned_labels = {"L2", "nope"};
    CHECK_THROWS_AS(sample_imbalanced(ds, spec), Error);
    spec.pinned_labels = {};
    spec.group_sizes = {11};
    CHECK_THROWS_AS(sample_imbalanced(ds, spec), Error);
    spec.group_sizes = {1, 1, 1, 1};
    CHECK_THROWS_AS(sample_imbalanced(ds, spec), Error);
}

TEST_CASE("Rng helpers") {
    Rng a(5);
    Rng b(5);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next() == b.next());
    }
    Rng r(9);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(r.below(7) < 7);
    }
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));

    std::vector<int> v{1, 2, 3, 4, 5, 6};
    r.shuffle(std::span<int>(v));
    std::sort(v.begin(), v.end());
    CHECK(v == std::vector<int>{1, 2, 3, 4, 5, 6});
}
