#include "iclust/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "iclust/error.hpp"
#include "iclust/rng.hpp"

namespace iclust {

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (rows_ == 0 || cols_ == 0) {
        throw Error("data matrix must have at least one row and one column");
    }
    if (values_.size() != rows_ * cols_) {
        throw Error("data matrix buffer has " + std::to_string(values_.size()) + " entries, expected " +
                    std::to_string(rows_ * cols_));
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw Error("non-finite entry at row " + std::to_string(k / cols_) + ", column " +
                        std::to_string(k % cols_));
        }
    }
}

DataMatrix DataMatrix::select_rows(std::span<const std::size_t> indices) const {
    std::vector<double> out;
    out.reserve(indices.size() * cols_);
    for (std::size_t i : indices) {
        auto r = row(i);
        out.insert(out.end(), r.begin(), r.end());
    }
    return {indices.size(), cols_, std::move(out)};
}

LabeledDataset::LabeledDataset(DataMatrix m, std::vector<std::string> l)
    : matrix(std::move(m)), labels(std::move(l)) {
    if (labels.size() != matrix.rows()) {
        throw Error("label count " + std::to_string(labels.size()) + " does not match row count " +
                    std::to_string(matrix.rows()));
    }
}

LabeledDataset LabeledDataset::select_rows(std::span<const std::size_t> indices) const {
    std::vector<std::string> l;
    l.reserve(indices.size());
    for (std::size_t i : indices) {
        l.push_back(labels[i]);
    }
    return {matrix.select_rows(indices), std::move(l)};
}

namespace {

// Splits one CSV record. Handles quoted fields with doubled quotes; a quoted
// field may not span lines.
std::vector<std::string> split_record(const std::string& line, const std::string& path, std::size_t row) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    cur.push_back('"');
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) {
        throw ParseError(path, row, fields.size() + 1, "unterminated quoted field");
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

}  // namespace

LabeledDataset load_csv(const std::filesystem::path& path, const std::optional<std::string>& label_column) {
    const std::string name = path.string();
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + name);
    }

    std::string line;
    std::size_t row = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (row == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        if (!trim(line).empty()) {
            header = split_record(line, name, row);
            break;
        }
    }
    if (header.empty()) {
        throw Error(name + ": empty file");
    }
    for (auto& h : header) {
        h = trim(h);
    }

    std::optional<std::size_t> label_idx;
    if (label_column) {
        auto it = std::find(header.begin(), header.end(), *label_column);
        if (it == header.end()) {
            throw Error(name + ": label column '" + *label_column + "' not found in header");
        }
        label_idx = static_cast<std::size_t>(it - header.begin());
    }
    const std::size_t arity = header.size();
    const std::size_t p = arity - (label_idx ? 1 : 0);
    if (p == 0) {
        throw Error(name + ": no feature columns");
    }

    std::vector<double> values;
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split_record(line, name, row);
        if (fields.size() != arity) {
            throw ParseError(name, row, std::min(fields.size(), arity) + 1,
                             "expected " + std::to_string(arity) + " fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < arity; ++c) {
            if (label_idx && c == *label_idx) {
                labels.push_back(trim(fields[c]));
                continue;
            }
            const std::string cell = trim(fields[c]);
            double v = 0.0;
            const char* first = cell.data();
            const char* last = cell.data() + cell.size();
            if (!cell.empty() && *first == '+') {
                ++first;
            }
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (cell.empty() || ec != std::errc() || ptr != last) {
                throw ParseError(name, row, c + 1, "cannot parse '" + cell + "' as a number");
            }
            if (!std::isfinite(v)) {
                throw ParseError(name, row, c + 1, "non-finite value '" + cell + "'");
            }
            values.push_back(v);
        }
        if (!label_idx) {
            labels.emplace_back(kUnlabeled);
        }
    }
    if (labels.empty()) {
        throw Error(name + ": no data rows");
    }
    const std::size_t n = labels.size();
    return {DataMatrix(n, p, std::move(values)), std::move(labels)};
}

namespace {

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const LabeledDataset& ds, const std::vector<std::string>& feature_names,
               const std::optional<std::string>& label_column) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    const std::size_t p = ds.matrix.cols();
    for (std::size_t j = 0; j < p; ++j) {
        if (j > 0) {
            out << ',';
        }
        out << quote_if_needed(j < feature_names.size() ? feature_names[j] : "x" + std::to_string(j + 1));
    }
    if (label_column) {
        out << ',' << quote_if_needed(*label_column);
    }
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            if (j > 0) {
                out << ',';
            }
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, ds.matrix(i, j));
            out.write(buf, ptr - buf);
        }
        if (label_column) {
            out << ',' << quote_if_needed(ds.labels[i]);
        }
        out << '\n';
    }
}

Standardized standardize(const DataMatrix& m) {
    const std::size_t n = m.rows();
    const std::size_t p = m.cols();
    if (n < 2) {
        throw Error("standardize requires at least 2 rows");
    }
    Standardized s;
    s.means.assign(p, 0.0);
    s.sds.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += m(i, j);
        }
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = m(i, j) - mean;
            ss += d * d;
        }
        s.means[j] = mean;
        s.sds[j] = std::sqrt(ss / static_cast<double>(n - 1));
        bool constant = true;
        for (std::size_t i = 1; i < n && constant; ++i) {
            constant = m(i, j) == m(0, j);
        }
        if (constant) {
            s.constant_columns.push_back(j);
            s.warnings.push_back({"constant_column", "column " + std::to_string(j) + " is constant; mapped to zeros", j});
        }
    }

    std::vector<double> out(n * p, 0.0);
    std::size_t next_constant = 0;
    for (std::size_t j = 0; j < p; ++j) {
        if (next_constant < s.constant_columns.size() && s.constant_columns[next_constant] == j) {
            ++next_constant;
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            out[i * p + j] = (m(i, j) - s.means[j]) / s.sds[j];
        }
    }
    s.matrix = DataMatrix(n, p, std::move(out));
    return s;
}

DataMatrix destandardize(const Standardized& s) {
    const std::size_t n = s.matrix.rows();
    const std::size_t p = s.matrix.cols();
    std::vector<double> out(n * p);
    for (std::size_t j = 0; j < p; ++j) {
        const bool constant =
            std::binary_search(s.constant_columns.begin(), s.constant_columns.end(), j);
        for (std::size_t i = 0; i < n; ++i) {
            out[i * p + j] = constant ? s.means[j] : s.matrix(i, j) * s.sds[j] + s.means[j];
        }
    }
    return {n, p, std::move(out)};
}

std::vector<std::string> distinct_labels(std::span<const std::string> labels) {
    std::set<std::string> seen(labels.begin(), labels.end());
    return {seen.begin(), seen.end()};
}

std::vector<LabeledDataset> sample_imbalanced(const LabeledDataset& ds, const SamplingSpec& spec) {
    if (spec.group_sizes.empty()) {
        throw Error("sampling spec has no group slots");
    }
    if (spec.replications == 0) {
        throw Error("sampling spec needs at least one replication");
    }
    if (!spec.pinned_labels.empty() && spec.pinned_labels.size() != spec.group_sizes.size()) {
        throw Error("pinned labels must name one source group per slot");
    }
    for (std::size_t s : spec.group_sizes) {
        if (s == 0) {
            throw Error("group sizes must be at least 1");
        }
    }

    // Source groups in sorted label order; members in row order.
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        members[ds.labels[i]].push_back(i);
    }
    std::vector<std::string> groups;
    for (const auto& [label, rows] : members) {
        groups.push_back(label);
    }
    const std::size_t slots = spec.group_sizes.size();
    if (groups.size() < slots) {
        throw Error("source has " + std::to_string(groups.size()) + " groups but " + std::to_string(slots) +
                    " slots were requested");
    }
    if (!spec.pinned_labels.empty()) {
        std::set<std::string> distinct(spec.pinned_labels.begin(), spec.pinned_labels.end());
        if (distinct.size() != slots) {
            throw Error("pinned labels must be distinct");
        }
    }

    std::vector<LabeledDataset> out;
    out.reserve(spec.replications);
    for (std::size_t rep = 0; rep < spec.replications; ++rep) {
        Rng rng(derive_seed(spec.seed, rep));
        std::vector<std::string> chosen;
        if (spec.pinned_labels.empty()) {
            std::vector<std::size_t> order(groups.size());
            std::iota(order.begin(), order.end(), 0);
            // Partial Fisher-Yates: the first `slots` entries are a uniform draw without replacement.
            for (std::size_t k = 0; k < slots; ++k) {
                std::swap(order[k], order[k + rng.below(order.size() - k)]);
                chosen.push_back(groups[order[k]]);
            }
        } else {
            chosen = spec.pinned_labels;
        }

        std::vector<std::size_t> rows;
        for (std::size_t slot = 0; slot < slots; ++slot) {
            auto it = members.find(chosen[slot]);
            if (it == members.end()) {
                throw Error("source has no group named '" + chosen[slot] + "'");
            }
            std::vector<std::size_t> pool = it->second;
            const std::size_t want = spec.group_sizes[slot];
            if (pool.size() < want) {
                throw Error("group '" + chosen[slot] + "' has " + std::to_string(pool.size()) + " rows, " +
                            std::to_string(want) + " requested");
            }
            for (std::size_t k = 0; k < want; ++k) {
                std::swap(pool[k], pool[k + rng.below(pool.size() - k)]);
                rows.push_back(pool[k]);
            }
        }
        rng.shuffle(std::span<std::size_t>(rows));
        out.push_back(ds.select_rows(rows));
    }
    return out;
}

}  // namespace iclust
