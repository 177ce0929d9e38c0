#include "iclust/partition.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <string>
#include <unordered_map>

#include "iclust/error.hpp"

namespace iclust {

Partition::Partition(std::vector<ClusterId> assignment) : assignment_(std::move(assignment)) {
    for (std::size_t i = 0; i < assignment_.size(); ++i) {
        clusters_[assignment_[i]].push_back(i);
    }
}

const std::vector<std::size_t>& Partition::members(ClusterId id) const {
    auto it = clusters_.find(id);
    if (it == clusters_.end()) {
        throw Error("no cluster with id " + std::to_string(id));
    }
    return it->second;
}

void Partition::merge(ClusterId into, ClusterId from) {
    if (into == from) {
        throw Error("cannot merge a cluster into itself");
    }
    auto src = clusters_.find(from);
    auto dst = clusters_.find(into);
    if (src == clusters_.end() || dst == clusters_.end()) {
        throw Error("merge of unknown cluster");
    }
    for (std::size_t i : src->second) {
        assignment_[i] = into;
    }
    std::vector<std::size_t> combined;
    combined.reserve(src->second.size() + dst->second.size());
    std::merge(dst->second.begin(), dst->second.end(), src->second.begin(), src->second.end(),
               std::back_inserter(combined));
    dst->second = std::move(combined);
    clusters_.erase(src);
}

Partition Partition::relabeled() const {
    std::unordered_map<ClusterId, ClusterId> map;
    std::vector<ClusterId> out(assignment_.size());
    for (std::size_t i = 0; i < assignment_.size(); ++i) {
        auto [it, inserted] = map.try_emplace(assignment_[i], map.size());
        out[i] = it->second;
    }
    return Partition(std::move(out));
}

bool same_grouping(const Partition& a, const Partition& b) {
    return a.size() == b.size() && a.relabeled() == b.relabeled();
}

void write_partition_csv(const std::filesystem::path& path, const Partition& part) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << "row_index,cluster_id\n";
    for (std::size_t i = 0; i < part.size(); ++i) {
        out << i << ',' << part[i] << '\n';
    }
}

namespace {

std::size_t parse_index(const std::string& s, const std::string& path, std::size_t row, std::size_t col) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError(path, row, col, "expected a nonnegative integer, found '" + s + "'");
    }
    return v;
}

}  // namespace

Partition read_partition_csv(const std::filesystem::path& path) {
    const std::string name = path.string();
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + name);
    }
    std::string line;
    std::size_t row = 0;
    std::vector<std::pair<std::size_t, ClusterId>> entries;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw ParseError(name, row, 1, "expected two fields");
        }
        entries.emplace_back(parse_index(line.substr(0, comma), name, row, 1),
                             parse_index(line.substr(comma + 1), name, row, 2));
    }
    if (entries.empty()) {
        throw Error(name + ": no partition rows");
    }
    std::vector<ClusterId> assignment(entries.size());
    std::vector<bool> seen(entries.size(), false);
    for (const auto& [idx, id] : entries) {
        if (idx >= entries.size()) {
            throw Error(name + ": row index " + std::to_string(idx) + " out of range");
        }
        if (seen[idx]) {
            throw Error(name + ": row index " + std::to_string(idx) + " appears twice");
        }
        seen[idx] = true;
        assignment[idx] = id;
    }
    return Partition(std::move(assignment));
}

}  // namespace iclust
