#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace iclust {

/// Dense row-major n x p matrix of finite reals (n, p >= 1).
class DataMatrix {
public:
    DataMatrix() = default;
    /// Throws iclust::Error if the shape is empty, the buffer size mismatches
    /// rows * cols, or any entry is NaN/Inf.
    DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// New matrix holding the given rows, in order.
    DataMatrix select_rows(std::span<const std::size_t> indices) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Label assigned to every row when a CSV has no label column.
inline constexpr const char* kUnlabeled = "_";

struct LabeledDataset {
    DataMatrix matrix;
    std::vector<std::string> labels;

    /// Validates labels.size() == matrix.rows().
    LabeledDataset(DataMatrix m, std::vector<std::string> l);

    std::size_t size() const noexcept { return labels.size(); }
    LabeledDataset select_rows(std::span<const std::size_t> indices) const;
};

struct Warning {
    std::string code;
    std::string message;
    std::optional<std::size_t> column;
};

/// Reads a headed CSV. Non-label cells must parse as finite doubles.
LabeledDataset load_csv(const std::filesystem::path& path,
                        const std::optional<std::string>& label_column = std::nullopt);

/// Writes features (and the label column, when `label_column` is set) as a headed CSV.
void write_csv(const std::filesystem::path& path, const LabeledDataset& ds,
               const std::vector<std::string>& feature_names = {},
               const std::optional<std::string>& label_column = std::nullopt);

struct Standardized {
    DataMatrix matrix;
    std::vector<double> means;
    std::vector<double> sds;
    /// Columns that were constant and were mapped to zeros.
    std::vector<std::size_t> constant_columns;
    std::vector<Warning> warnings;
};

/// Column z-scores with the n-1 standard deviation. Requires n >= 2.
Standardized standardize(const DataMatrix& m);

/// Inverse of `standardize` for the non-constant columns; constant columns
/// are restored to their mean.
DataMatrix destandardize(const Standardized& s);

struct SamplingSpec {
    std::vector<std::size_t> group_sizes;
    std::size_t replications = 1;
    std::uint64_t seed = 0;
    /// When non-empty, slot i is drawn from the source group named pinned_labels[i]
    /// instead of a randomly chosen group.
    std::vector<std::string> pinned_labels;
};

/// Draws `spec.replications` imbalanced datasets from `ds`. Each replication
/// assigns slots to distinct source groups at random, draws rows without
/// replacement within each group and shuffles the output rows.
std::vector<LabeledDataset> sample_imbalanced(const LabeledDataset& ds, const SamplingSpec& spec);

/// Distinct labels in sorted order.
std::vector<std::string> distinct_labels(std::span<const std::string> labels);

}  // namespace iclust
